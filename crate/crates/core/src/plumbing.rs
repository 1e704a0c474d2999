//! Weighted forests and their intersection forms.
//!
//! A graph is a forest of vertices carrying integer weights. Its intersection
//! form is the symmetric matrix with the weights on the diagonal and a 1 in
//! entry (i, j) exactly when vertices i and j share an edge. These forms
//! present the plumbed 3-manifolds whose lattice data the rest of the crate
//! analyzes.

use crate::linalg::{self, IntMatrix, LinalgError};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge between {0:?} and {1:?}")]
    DuplicateEdge(String, String),
    #[error("graph contains a cycle through {0:?}")]
    Cycle(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("intersection form is degenerate (determinant 0)")]
    Degenerate,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Deserialize)]
struct RawGraph {
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
struct RawVertex {
    id: String,
    weight: i64,
}

/// A weighted forest. Vertex order is the order of appearance in the input
/// and fixes the row/column order of the intersection form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Parses `{"vertices": [{"id", "weight"}...], "edges": [[id, id]...]}`
    /// and validates that the result is a forest.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let raw: RawGraph =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::build(raw)
    }

    pub fn from_parts(vertices: Vec<(String, i64)>, edges: Vec<(String, String)>) -> Result<Self, GraphError> {
        let raw = RawGraph {
            vertices: vertices
                .into_iter()
                .map(|(id, weight)| RawVertex { id, weight })
                .collect(),
            edges,
        };
        Self::build(raw)
    }

    fn build(raw: RawGraph) -> Result<Self, GraphError> {
        if raw.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut ids = Vec::with_capacity(raw.vertices.len());
        let mut weights = Vec::with_capacity(raw.vertices.len());
        for v in &raw.vertices {
            if ids.contains(&v.id) {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
            ids.push(v.id.clone());
            weights.push(v.weight);
        }
        let index_of = |id: &str| ids.iter().position(|x| x == id);
        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut adjacency = vec![Vec::new(); ids.len()];
        // union-find for the forest check
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in &raw.edges {
            let i = index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let j = index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            if i == j {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            let key = (i.min(j), i.max(j));
            if edges.contains(&key) {
                return Err(GraphError::DuplicateEdge(a.clone(), b.clone()));
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                return Err(GraphError::Cycle(a.clone()));
            }
            parent[ri] = rj;
            edges.push(key);
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Self { ids, weights, edges, adjacency })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn intersection_form(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zero(n, n);
        for v in 0..n {
            *m.at_mut(v, v) = BigInt::from(self.weights[v]);
        }
        for &(i, j) in &self.edges {
            *m.at_mut(i, j) = BigInt::from(1);
            *m.at_mut(j, i) = BigInt::from(1);
        }
        m
    }

    /// Vertices whose weight exceeds the negative of their degree.
    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.weights[v] > -(self.degree(v) as i64))
            .collect()
    }

    pub fn is_negative_definite(&self) -> Result<bool, GraphError> {
        Ok(linalg::is_negative_definite(&self.intersection_form())?)
    }

    /// Order of the first homology of the plumbed manifold: |det Q|.
    /// Degenerate forms (infinite homology) are rejected.
    pub fn h1_order(&self) -> Result<BigInt, GraphError> {
        let d = linalg::det_exact(&self.intersection_form())?;
        if d == BigInt::from(0) {
            return Err(GraphError::Degenerate);
        }
        Ok(d.abs())
    }
}
