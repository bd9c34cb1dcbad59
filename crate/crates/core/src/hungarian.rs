//! Maximum-weight bipartite matching with the Hungarian method.
//!
//! Shortest augmenting path formulation with row/column potentials,
//! O(n³) in the padded dimension. Maximization runs as minimization of
//! `max_w − w` on the zero-padded square matrix.

use crate::error::{Error, Result};

/// A dense, row-major weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged weight matrix"));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w * factor).collect(),
        }
    }
}

/// Sum of matched weights in a canonical order (ascending), so two matchings
/// that use the same multiset of weights report bit-identical totals.
pub fn canonical_total(mut weights: Vec<f64>) -> f64 {
    weights.sort_by(f64::total_cmp);
    weights.into_iter().fold(0.0, |acc, w| acc + w)
}

/// Optimal matching: `(row, col)` pairs with strictly positive weight,
/// sorted by row, and their total.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub total: f64,
}

/// Maximum-weight matching where each row and each column is used at most once.
pub fn hungarian_max(weights: &WeightMatrix) -> Result<Matching> {
    if let Some(w) = weights.data.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::domain(format!(
            "weights must be finite and non-negative, found {w}"
        )));
    }
    let (rows, cols) = (weights.rows, weights.cols);
    if rows == 0 || cols == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            total: 0.0,
        });
    }
    let n = rows.max(cols);
    let max_w = weights.data.iter().copied().fold(0.0, f64::max);
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            max_w - weights.get(i, j)
        } else {
            max_w
        }
    };

    // 1-based potentials; column 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        min_slack.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .filter_map(|j| {
            let i = owner[j];
            (i >= 1 && i <= rows && j <= cols && weights.get(i - 1, j - 1) > 0.0)
                .then(|| (i - 1, j - 1))
        })
        .collect();
    pairs.sort_unstable();
    let total = canonical_total(pairs.iter().map(|&(r, c)| weights.get(r, c)).collect());
    Ok(Matching { pairs, total })
}
