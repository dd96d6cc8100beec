//! Synthetic graphs for benchmarks.

use rand::distributions::{Distribution, WeightedIndex};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::graph::{GraphBuilder, LabeledGraph};

/// Shape of a random labeled graph.
///
/// Endpoints are uniform over `vertices`; label `i` of `L` is drawn with
/// weight `L - i`, so the first labels are the most frequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub edges: usize,
    pub vertices: usize,
    pub labels: Vec<String>,
    pub seed: u64,
}

impl SyntheticSpec {
    /// `edges` edges over as many vertices, labels `l0`..`l{labels-1}`.
    pub fn new(edges: usize, labels: usize, seed: u64) -> Self {
        SyntheticSpec {
            edges,
            vertices: edges.max(1),
            labels: (0..labels).map(|i| format!("l{i}")).collect(),
            seed,
        }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }

    /// Edges as `(src, label, dst)` name triples, in generation order.
    pub fn triples(&self) -> Vec<(String, &str, String)> {
        if self.labels.is_empty() || self.vertices == 0 {
            return Vec::new();
        }
        let mut rng = StdRng::seed_from_u64(self.seed);
        let l = self.labels.len();
        let weights = WeightedIndex::new((0..l).map(|i| l - i)).expect("positive weights");
        (0..self.edges)
            .map(|_| {
                let u = rng.gen_range(0..self.vertices);
                let v = rng.gen_range(0..self.vertices);
                let label = &self.labels[weights.sample(&mut rng)];
                (format!("v{u}"), label.as_str(), format!("v{v}"))
            })
            .collect()
    }

    /// The graph as triple lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, l, v) in self.triples() {
            out.push_str(&format!("{u} {l} {v}\n"));
        }
        out
    }

    /// Builds the graph, optionally with `_r` inverse edges.
    pub fn build(&self, add_inverse: bool) -> LabeledGraph {
        let mut b = GraphBuilder::new();
        for (u, l, v) in self.triples() {
            b.add_edge(&u, l, &v);
            if add_inverse {
                b.add_edge(&v, &crate::graph::inverse_label(l), &u);
            }
        }
        b.build()
    }
}
