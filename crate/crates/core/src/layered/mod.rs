//! Layered distance configurations and exact counting.
//!
//! A [`LayeredConfig`] holds point sets `P_1, ..., P_{k+1}` and a squared
//! distance vector of length `k`. Chains pick one point per layer so that
//! consecutive picks realize the prescribed distances; walks drop the
//! distinctness requirement.

mod adjacency;
mod count;
mod tree;

pub use adjacency::{
    build_adjacency, build_adjacency_with, count_incidences, neighbor_lists, BipartiteAdjacency,
    Strategy,
};
pub use count::{
    count_chains, count_chains_adj, count_chains_partitioned, count_walks, count_walks_adj,
    for_each_chain,
};
pub use tree::{
    count_tree_embeddings, count_tree_embeddings_single, count_tree_homomorphisms, LabeledTree,
    TreeEdge,
};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{format_rational, CoordKey, DistanceSpec, Mode, PointSet, Rational};

/// Point sets `P_1..P_{k+1}` plus the distance vector `delta2` of length `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredConfig {
    spec: DistanceSpec,
    layers: Vec<PointSet>,
}

impl LayeredConfig {
    pub fn new(layers: Vec<PointSet>, spec: DistanceSpec) -> Result<Self> {
        let config = LayeredConfig { spec, layers };
        config.validate()?;
        Ok(config)
    }

    /// The same set repeated as all `delta2.len() + 1` layers.
    pub fn repeated(set: PointSet, spec: DistanceSpec) -> Result<Self> {
        let layers = vec![set; spec.k() + 1];
        Self::new(layers, spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.layers.len() != self.spec.k() + 1 {
            return Err(Error::InvalidConfig(format!(
                "{} layers for {} distances (need k+1)",
                self.layers.len(),
                self.spec.k()
            )));
        }
        let dim = self.layers[0].dim();
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.dim() != dim {
                return Err(Error::DimensionMismatch(dim, layer.dim()));
            }
            if layer.kind() != self.spec.mode.kind() {
                return Err(Error::InvalidConfig(format!(
                    "layer {} holds {} points but the mode is {}",
                    i + 1,
                    layer.kind(),
                    self.spec.mode
                )));
            }
            if !layer.ids_unique() {
                return Err(Error::InvalidConfig(format!(
                    "layer {} has duplicate point ids",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.spec.k()
    }

    pub fn dim(&self) -> usize {
        self.layers[0].dim()
    }

    pub fn spec(&self) -> &DistanceSpec {
        &self.spec
    }

    pub fn mode(&self) -> Mode {
        self.spec.mode
    }

    pub fn delta2(&self) -> &[Rational] {
        &self.spec.delta2
    }

    pub fn layers(&self) -> &[PointSet] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &PointSet {
        &self.layers[i]
    }

    pub fn into_layers(self) -> Vec<PointSet> {
        self.layers
    }

    pub fn max_layer_size(&self) -> usize {
        self.layers.iter().map(PointSet::len).max().unwrap_or(0)
    }

    /// Layers and distances in reverse order.
    pub fn reversed(&self) -> Self {
        LayeredConfig {
            spec: self.spec.reversed(),
            layers: self.layers.iter().rev().cloned().collect(),
        }
    }

    /// Same distances, each layer replaced by the points at `indices[i]`.
    pub fn restricted(&self, indices: &[Vec<usize>]) -> Self {
        LayeredConfig {
            spec: self.spec.clone(),
            layers: self
                .layers
                .iter()
                .zip(indices)
                .map(|(l, idx)| l.subset(idx))
                .collect(),
        }
    }

    /// Converts an exact configuration to tolerant mode with the given `eps`.
    pub fn to_tolerant(&self, eps: f64) -> Result<Self> {
        let spec = DistanceSpec::new(self.spec.delta2.clone(), Mode::Tolerant(eps))?;
        Self::new(self.layers.iter().map(PointSet::to_float).collect(), spec)
    }

    /// Whether the layers are pairwise disjoint as coordinate sets.
    pub fn layers_disjoint(&self) -> bool {
        let mut seen: HashMap<CoordKey, usize> = HashMap::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for p in layer {
                if let Some(&j) = seen.get(&p.key()) {
                    if j != i {
                        return false;
                    }
                }
                seen.insert(p.key(), i);
            }
        }
        true
    }

    pub fn summary(&self) -> String {
        let sizes: Vec<String> = self.layers.iter().map(|l| l.len().to_string()).collect();
        let deltas: Vec<String> = self.spec.delta2.iter().map(format_rational).collect();
        format!(
            "k={} dim={} mode={} |P_i|=[{}] delta2=[{}]",
            self.k(),
            self.dim(),
            self.mode(),
            sizes.join(","),
            deltas.join(",")
        )
    }
}

/// Canonical ids shared across layers: two entries get the same id iff the
/// underlying points have equal coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Identity {
    pub ids: Vec<Vec<u32>>,
}

impl Identity {
    pub fn of_layers(layers: &[PointSet]) -> Self {
        let mut map: HashMap<CoordKey, u32> = HashMap::new();
        let ids = layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|p| {
                        let next = map.len() as u32;
                        *map.entry(p.key()).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        Identity { ids }
    }
}
