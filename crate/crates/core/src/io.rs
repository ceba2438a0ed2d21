//! JSON file formats.
//!
//! ```text
//! graph:     {"vertices": n, "edges": [[u, v], ...]}      edge order = EdgeId
//! divisor:   {"coeffs": [c0, c1, ...]}
//! morphism:  {"vmap": [...], "emap": [{"edge": j} | {"vertex": v}, ...]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexId};
use crate::hyperelliptic::HyperellipticWitness;
use crate::morphism::{EdgeImage, GraphMorphism};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[VertexId; 2]>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Multigraph> {
        Multigraph::new(self.vertices, self.edges.iter().map(|&[u, v]| (u, v)).collect())
    }
}

impl From<&Multigraph> for GraphJson {
    fn from(g: &Multigraph) -> Self {
        GraphJson { vertices: g.vertex_count(), edges: g.edges().iter().map(|&(u, v)| [u, v]).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub coeffs: Vec<i64>,
}

impl DivisorJson {
    pub fn to_divisor(&self, g: &Multigraph) -> Result<Divisor> {
        let d = Divisor::new(self.coeffs.clone());
        d.check_len(g)?;
        Ok(d)
    }
}

impl From<&Divisor> for DivisorJson {
    fn from(d: &Divisor) -> Self {
        DivisorJson { coeffs: d.coeffs().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub vmap: Vec<VertexId>,
    pub emap: Vec<EdgeImage>,
}

impl MorphismJson {
    pub fn to_morphism(&self, source: &Multigraph, target: &Multigraph) -> Result<GraphMorphism> {
        GraphMorphism::new(source.clone(), target.clone(), self.vmap.clone(), self.emap.clone())
    }
}

impl From<&GraphMorphism> for MorphismJson {
    fn from(m: &GraphMorphism) -> Self {
        MorphismJson { vmap: m.vmap().to_vec(), emap: m.emap().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub divisor: DivisorJson,
    pub involution: MorphismJson,
    pub quotient_tree: GraphJson,
    pub quotient_map: MorphismJson,
}

impl WitnessJson {
    pub fn new(g: &Multigraph, w: &HyperellipticWitness) -> Self {
        WitnessJson {
            divisor: (&w.divisor).into(),
            involution: (&w.involution.to_morphism(g)).into(),
            quotient_tree: (&w.quotient_tree).into(),
            quotient_map: (&w.quotient_map).into(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_graph(path: &Path) -> Result<Multigraph> {
    read_json::<GraphJson>(path)?.to_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::banana_unit;

    #[test]
    fn graph_round_trip() {
        let g = banana_unit(3).unwrap();
        let text = serde_json::to_string(&GraphJson::from(&g)).unwrap();
        assert_eq!(text, r#"{"vertices":2,"edges":[[0,1],[0,1],[0,1]]}"#);
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn rejects_bad_graphs() {
        let loopy: GraphJson = serde_json::from_str(r#"{"vertices":2,"edges":[[0,0],[0,1]]}"#).unwrap();
        assert!(matches!(loopy.to_graph(), Err(Error::LoopEdge { .. })));
        let split: GraphJson = serde_json::from_str(r#"{"vertices":3,"edges":[[0,1]]}"#).unwrap();
        assert!(matches!(split.to_graph(), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn morphism_format() {
        let m: MorphismJson = serde_json::from_str(r#"{"vmap":[0,1],"emap":[{"edge":1},{"vertex":0}]}"#).unwrap();
        assert_eq!(m.emap, vec![EdgeImage::Edge(1), EdgeImage::Vertex(0)]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"vmap":[0,1],"emap":[{"edge":1},{"vertex":0}]}"#);
    }

    #[test]
    fn divisor_length_checked() {
        let d = DivisorJson { coeffs: vec![1, 2, 3] };
        assert!(d.to_divisor(&banana_unit(2).unwrap()).is_err());
    }
}
