//! Integer partitions stored as weakly decreasing row lengths.
//!
//! Box coordinates `(i, j)` are 1-based: `i` is the row, `j` the column.

use crate::error::{Error, Result};
use std::fmt;

/// A Young diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Self { rows: Vec::new() }
    }

    /// Builds a partition from row lengths. Zero rows are dropped; the rest
    /// must be weakly decreasing.
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        let rows: Vec<usize> = rows.into_iter().filter(|&r| r > 0).collect();
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "rows {rows:?} are not weakly decreasing"
            )));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn weight(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// λ_i for 1-based `i`, zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.rows.get(i - 1).copied().unwrap_or(0)
    }

    /// λ'_j, the height of column `j` (1-based), zero past the first row.
    pub fn col(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.rows.iter().take_while(|&&r| r >= j).count()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.row(1);
        Partition {
            rows: (1..=width).map(|j| self.col(j)).collect(),
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && j <= self.row(i)
    }

    /// h_λ(i,j) = λ_i + λ'_j − i − j + 1.
    pub fn hook_length(&self, i: usize, j: usize) -> Result<usize> {
        if !self.contains(i, j) {
            return Err(Error::InvalidBox { i, j });
        }
        Ok(self.row(i) + self.col(j) + 1 - i - j)
    }

    /// Boxes in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (1..=r).map(move |j| (i + 1, j)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// h_λ(i,j) for a 1-based box.
pub fn hook_length(lambda: &Partition, i: usize, j: usize) -> Result<usize> {
    lambda.hook_length(i, j)
}

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

/// All partitions of `n` in lexicographically decreasing order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(remaining: usize, cap: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            rows: current.clone(),
        });
        return;
    }
    for part in (1..=remaining.min(cap)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// Pairs (λ, μ) grouped by total weight `|λ| + |μ|`, for levels `0..=max_level`.
pub fn pairs_by_level(max_level: usize) -> Vec<Vec<(Partition, Partition)>> {
    let by_weight: Vec<Vec<Partition>> = (0..=max_level).map(partitions_of).collect();
    (0..=max_level)
        .map(|level| {
            let mut pairs = Vec::new();
            for a in 0..=level {
                for lam in &by_weight[a] {
                    for mu in &by_weight[level - a] {
                        pairs.push((lam.clone(), mu.clone()));
                    }
                }
            }
            pairs
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        let four: Vec<Vec<usize>> = partitions_of(4).iter().map(|l| l.rows().to_vec()).collect();
        assert_eq!(
            four,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn hooks() {
        assert_eq!(p(&[1]).hook_length(1, 1).unwrap(), 1);
        assert_eq!(p(&[2, 1]).hook_length(1, 1).unwrap(), 3);
        assert_eq!(p(&[4, 2, 1]).hook_length(1, 2).unwrap(), 4);
        assert_eq!(
            p(&[2, 1]).hook_length(2, 2),
            Err(Error::InvalidBox { i: 2, j: 2 })
        );
        assert!(p(&[2]).hook_length(0, 1).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[5, 5, 2]).conjugate(), p(&[3, 3, 2, 2, 2]));
    }

    #[test]
    fn rejects_increasing_rows() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 0, 0]).unwrap(), p(&[2]));
    }

    #[test]
    fn pair_counts() {
        // Σ_a p(a) p(k − a): 1, 2, 5, 10, 20
        let counts: Vec<usize> = pairs_by_level(4).iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[3, 1]).to_string(), "3+1");
        assert_eq!(Partition::empty().to_string(), "∅");
    }
}
