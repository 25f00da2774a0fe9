//! Integer matrices with partition labels on both axes.

use serde::{Deserialize, Serialize};

use crate::scalar::Q;
use crate::symgrp::{lambda_plus, Partition};

/// Square or rectangular integer matrix, `entries[row][col]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub rows: Vec<Partition>,
    pub cols: Vec<Partition>,
    pub entries: Vec<Vec<i64>>,
}

pub type DecompositionMatrix = TransitionMatrix;

impl TransitionMatrix {
    pub fn from_fn(rows: Vec<Partition>, cols: Vec<Partition>, mut f: impl FnMut(&Partition, &Partition) -> i64) -> Self {
        let entries = rows.iter().map(|r| cols.iter().map(|c| f(r, c)).collect()).collect();
        TransitionMatrix { rows, cols, entries }
    }

    pub fn get(&self, row: &Partition, col: &Partition) -> Option<i64> {
        let i = self.rows.iter().position(|r| r == row)?;
        let j = self.cols.iter().position(|c| c == col)?;
        Some(self.entries[i][j])
    }

    /// Nonzero entries `(row, col, value)`, in storage order.
    pub fn nonzero(&self) -> Vec<(&Partition, &Partition, i64)> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in self.cols.iter().enumerate() {
                if self.entries[i][j] != 0 {
                    out.push((r, c, self.entries[i][j]));
                }
            }
        }
        out
    }

    /// Ones on the diagonal and nothing else except strictly smaller rows below larger columns.
    pub fn is_lower_unitriangular(&self) -> bool {
        self.cols.iter().all(|c| self.get(c, c) == Some(1))
            && self.nonzero().into_iter().all(|(r, c, _)| r == c || r.size() < c.size())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }
}

/// Labels of simple modules: `Λ⁺(m)` without `∅` when `δ = 0` and `m` is even and positive.
pub fn lambda_tilde_plus(m: usize, delta: &Q) -> Vec<Partition> {
    let mut v = lambda_plus(m);
    if num_traits::Zero::is_zero(delta) && m > 0 && m % 2 == 0 {
        v.retain(|l| !l.is_empty());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn labels_and_shape() {
        assert_eq!(lambda_tilde_plus(2, &q(0)).len(), 2);
        assert_eq!(lambda_tilde_plus(2, &q(1)).len(), 3);
        assert_eq!(lambda_tilde_plus(0, &q(0)), vec![Partition::empty()]);
        let rows = lambda_plus(2);
        let m = TransitionMatrix::from_fn(rows.clone(), rows.clone(), |r, c| i64::from(r == c));
        assert!(m.is_lower_unitriangular());
        let back: TransitionMatrix = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.to_json(), r#"{"rows":[[2],[1,1],[]],"cols":[[2],[1,1],[]],"entries":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    }
}
