use std::fmt::Write as _;

use crate::error::{invalid, Result};

/// Unit cells on an `r × c` grid. Vertex id is `(row·cols + col)·8 + k`;
/// `k ∈ 0..4` is the left shore, coupled to the same `k` in the cells above
/// and below, and `k ∈ 4..8` is the right shore, coupled to the same `k` in
/// the cells to the left and right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChimeraGraph {
    rows: usize,
    cols: usize,
    adjacency: Vec<Vec<usize>>,
}

impl ChimeraGraph {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("Chimera graph needs at least one row and one column"));
        }
        let mut adjacency = vec![Vec::new(); 8 * rows * cols];
        let id = |r: usize, c: usize, k: usize| (r * cols + c) * 8 + k;
        let mut link = |a: usize, b: usize| {
            adjacency[a].push(b);
            adjacency[b].push(a);
        };
        for r in 0..rows {
            for c in 0..cols {
                for left in 0..4 {
                    for right in 4..8 {
                        link(id(r, c, left), id(r, c, right));
                    }
                    if r + 1 < rows {
                        link(id(r, c, left), id(r + 1, c, left));
                    }
                }
                for right in 4..8 {
                    if c + 1 < cols {
                        link(id(r, c, right), id(r, c + 1, right));
                    }
                }
            }
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(Self { rows, cols, adjacency })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn vertex(&self, row: usize, col: usize, k: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols && k < 8);
        (row * self.cols + col) * 8 + k
    }

    /// `(row, col, k)` of vertex `v`.
    pub fn coordinates(&self, v: usize) -> (usize, usize, usize) {
        let cell = v / 8;
        (cell / self.cols, cell % self.cols, v % 8)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a).is_some_and(|nb| nb.binary_search(&b).is_ok())
    }

    /// Edges `(a, b)` with `a < b` in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nb)| nb.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    /// One `a b` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}
