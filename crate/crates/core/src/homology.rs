use serde::{Deserialize, Serialize};

/// Homology dimensions `dim H_i` at internal degree `m` over the window
/// `0 ≤ i ≤ max_index`, `0 ≤ m ≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub max_index: usize,
    pub max_degree: usize,
    /// `entries[i][m]`.
    pub entries: Vec<Vec<usize>>,
}

impl HomologyTable {
    /// Homology of a chain complex from its term dimensions and ranks.
    /// `term_dims[i][m]` is the dimension of `C_i`, `out_ranks[i][m]` the rank
    /// of the map leaving `C_i` and `in_ranks[i][m]` the rank of the map
    /// arriving in it.
    pub fn from_ranks(term_dims: &[Vec<usize>], out_ranks: &[Vec<usize>], in_ranks: &[Vec<usize>]) -> Self {
        let max_index = term_dims.len() - 1;
        let max_degree = term_dims[0].len() - 1;
        let entries = (0..=max_index)
            .map(|i| {
                (0..=max_degree)
                    .map(|m| {
                        let kernel = term_dims[i][m] - out_ranks[i][m];
                        kernel
                            .checked_sub(in_ranks[i][m])
                            .expect("image larger than kernel: not a complex")
                    })
                    .collect()
            })
            .collect();
        HomologyTable {
            max_index,
            max_degree,
            entries,
        }
    }

    pub fn get(&self, i: usize, m: usize) -> usize {
        self.entries[i][m]
    }

    /// `Σ_m dim H_i` for each `i`.
    pub fn totals(&self) -> Vec<usize> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&d| d == 0)
    }

    /// `(i, m, dim)` for every nonzero entry.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (m, &d) in row.iter().enumerate() {
                if d != 0 {
                    out.push((i, m, d));
                }
            }
        }
        out
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, max_index: usize, max_degree: usize) -> HomologyTable {
        assert!(max_index <= self.max_index && max_degree <= self.max_degree);
        HomologyTable {
            max_index,
            max_degree,
            entries: self.entries[..=max_index]
                .iter()
                .map(|row| row[..=max_degree].to_vec())
                .collect(),
        }
    }

    /// `(i, m, self, other)` wherever the two tables disagree on the shared window.
    pub fn diff(&self, other: &HomologyTable) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.max_index.min(other.max_index) {
            for m in 0..=self.max_degree.min(other.max_degree) {
                let (a, b) = (self.get(i, m), other.get(i, m));
                if a != b {
                    out.push((i, m, a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_to_homology() {
        // k → k² → k → k: ranks 1, 0, 1 from the left
        let dims = vec![vec![1], vec![2], vec![1]];
        let out = vec![vec![1], vec![0], vec![1]];
        let inn = vec![vec![0], vec![1], vec![0]];
        let t = HomologyTable::from_ranks(&dims, &out, &inn);
        assert_eq!(t.entries, vec![vec![0], vec![1], vec![0]]);
        assert_eq!(t.totals(), vec![0, 1, 0]);
        assert_eq!(t.nonzero(), vec![(1, 0, 1)]);
        assert!(!t.is_zero());
        assert_eq!(t.restrict(0, 0).entries, vec![vec![0]]);
    }

    #[test]
    fn diff_on_shared_window() {
        let a = HomologyTable { max_index: 1, max_degree: 1, entries: vec![vec![1, 0], vec![0, 2]] };
        let b = HomologyTable { max_index: 0, max_degree: 2, entries: vec![vec![1, 3, 0]] };
        assert_eq!(a.diff(&b), vec![(0, 1, 0, 3)]);
    }
}
