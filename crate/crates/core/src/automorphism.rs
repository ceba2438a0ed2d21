//! Automorphisms of multigraphs and their enumeration.
//!
//! Enumeration runs in two layers: vertex permutations preserving every
//! edge multiplicity (backtracking with degree pruning), then every
//! bijection between corresponding parallel classes.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::morphism::{EdgeImage, GraphMorphism};

/// Default cap on the number of automorphisms listed.
pub const DEFAULT_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Automorphism {
    vmap: Vec<VertexId>,
    emap: Vec<EdgeId>,
}

impl Automorphism {
    /// Checks bijectivity and that every edge goes to an edge joining the
    /// images of its ends.
    pub fn new(g: &Multigraph, vmap: Vec<VertexId>, emap: Vec<EdgeId>) -> Result<Self> {
        let is_perm = |p: &[usize], n: usize| {
            p.len() == n && {
                let mut seen = vec![false; n];
                p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
            }
        };
        if !is_perm(&vmap, g.vertex_count()) || !is_perm(&emap, g.edge_count()) {
            return Err(Error::InvalidParameter("automorphism maps must be permutations".into()));
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = g.endpoints(emap[e]);
            let (fu, fv) = (vmap[u], vmap[v]);
            if !((fu, fv) == (a, b) || (fu, fv) == (b, a)) {
                return Err(Error::NotAMorphism { edge: e, reason: "ends not preserved".into() });
            }
        }
        Ok(Automorphism { vmap, emap })
    }

    pub fn identity(g: &Multigraph) -> Self {
        Automorphism { vmap: g.vertices().collect(), emap: (0..g.edge_count()).collect() }
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vmap[v]
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.emap[e]
    }

    pub fn vmap(&self) -> &[VertexId] {
        &self.vmap
    }

    pub fn emap(&self) -> &[EdgeId] {
        &self.emap
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vmap: other.vmap.iter().map(|&v| self.vmap[v]).collect(),
            emap: other.emap.iter().map(|&e| self.emap[e]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vmap = vec![0; self.vmap.len()];
        for (v, &w) in self.vmap.iter().enumerate() {
            vmap[w] = v;
        }
        let mut emap = vec![0; self.emap.len()];
        for (e, &f) in self.emap.iter().enumerate() {
            emap[f] = e;
        }
        Automorphism { vmap, emap }
    }

    pub fn is_identity(&self) -> bool {
        self.vmap.iter().enumerate().all(|(i, &v)| i == v) && self.emap.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.compose(self).is_identity()
    }

    /// Fixes no directed edge: every edge sent to itself has its ends
    /// swapped.
    pub fn is_mixing(&self, g: &Multigraph) -> bool {
        (0..g.edge_count()).all(|e| self.emap[e] != e || self.vmap[g.endpoints(e).0] != g.endpoints(e).0)
    }

    pub fn to_morphism(&self, g: &Multigraph) -> GraphMorphism {
        GraphMorphism::new(
            g.clone(),
            g.clone(),
            self.vmap.clone(),
            self.emap.iter().map(|&e| EdgeImage::Edge(e)).collect(),
        )
        .expect("automorphisms are morphisms")
    }
}

/// Vertex permutations preserving all edge multiplicities.
pub fn vertex_automorphisms(g: &Multigraph) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, 0, &mut image, &mut used, &mut out);
    out
}

fn extend(g: &Multigraph, v: VertexId, image: &mut [usize], used: &mut [bool], out: &mut Vec<Vec<VertexId>>) {
    let n = g.vertex_count();
    if v == n {
        out.push(image.to_vec());
        return;
    }
    for w in 0..n {
        if used[w] || g.degree(w) != g.degree(v) {
            continue;
        }
        if (0..v).all(|u| g.multiplicity(u, v) == g.multiplicity(image[u], w)) {
            image[v] = w;
            used[w] = true;
            extend(g, v + 1, image, used, out);
            used[w] = false;
        }
    }
    image[v] = usize::MAX;
}

/// Parallel classes keyed by the sorted vertex pair.
fn parallel_classes(g: &Multigraph) -> BTreeMap<(VertexId, VertexId), Vec<EdgeId>> {
    let mut classes: BTreeMap<_, Vec<EdgeId>> = BTreeMap::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        classes.entry((u.min(v), u.max(v))).or_default().push(e);
    }
    classes
}

/// Every edge-level lift of a vertex automorphism.
pub fn lifts(g: &Multigraph, vmap: &[VertexId], limit: usize) -> Result<Vec<Automorphism>> {
    let classes = parallel_classes(g);
    let mut partial = vec![vec![usize::MAX; g.edge_count()]];
    for (&(u, v), edges) in &classes {
        let (a, b) = (vmap[u], vmap[v]);
        let targets = &classes[&(a.min(b), a.max(b))];
        let mut next = Vec::new();
        for emap in &partial {
            for perm in targets.iter().permutations(targets.len()) {
                let mut e2 = emap.clone();
                for (&e, &f) in edges.iter().zip(perm) {
                    e2[e] = f;
                }
                next.push(e2);
                if next.len() > limit {
                    return Err(Error::BudgetExceeded { what: "automorphisms".into(), limit });
                }
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|emap| Automorphism { vmap: vmap.to_vec(), emap }).collect())
}

/// The full automorphism group, at most `limit` elements.
pub fn automorphisms(g: &Multigraph, limit: usize) -> Result<Vec<Automorphism>> {
    let mut out = Vec::new();
    for vmap in vertex_automorphisms(g) {
        out.extend(lifts(g, &vmap, limit)?);
        if out.len() > limit {
            return Err(Error::BudgetExceeded { what: "automorphisms".into(), limit });
        }
    }
    Ok(out)
}

/// Non-identity automorphisms of order two.
pub fn involutions(g: &Multigraph, limit: usize) -> Result<Vec<Automorphism>> {
    Ok(automorphisms(g, limit)?.into_iter().filter(Automorphism::is_involution).collect())
}

/// The subgroup `{id, ι}`.
pub fn generated_by_involution(g: &Multigraph, iota: &Automorphism) -> Vec<Automorphism> {
    vec![Automorphism::identity(g), iota.clone()]
}
