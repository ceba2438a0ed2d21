//! Harmonic 1-forms (flows), the fundamental-cycle basis, push/pull of
//! forms, the automorphism action on the flow space, and the canonical map.
//!
//! A 1-form is stored by its value on each edge in reference orientation
//! (first endpoint to second); the reverse direction carries the negative.
//! The basis comes from a BFS spanning tree at vertex 0. Basis flow `λ_i` is
//! the fundamental cycle of the `i`-th non-tree edge, equal to 1 on that
//! edge, so a flow's coordinates are its values on the non-tree edges.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::automorphism::{self, Automorphism};
use crate::error::{Error, Result};
use crate::graph::{DirectedEdge, EdgeId, Multigraph, VertexId};
use crate::linalg::{self, RatMatrix};
use crate::morphism::HarmonicMorphism;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneForm {
    values: Vec<BigRational>,
}

impl OneForm {
    pub fn new(values: Vec<BigRational>) -> Self {
        OneForm { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        OneForm { values: values.iter().map(|&x| q(x)).collect() }
    }

    pub fn zero(m: usize) -> Self {
        OneForm { values: vec![BigRational::zero(); m] }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Value on a directed edge.
    pub fn at(&self, d: DirectedEdge) -> BigRational {
        if d.forward {
            self.values[d.edge].clone()
        } else {
            -self.values[d.edge].clone()
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> OneForm {
        OneForm { values: self.values.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `δω(x) = sum of ω(e) over directed edges e ending at x`.
    pub fn coboundary(&self, g: &Multigraph) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); g.vertex_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            out[v] += &self.values[e];
            out[u] -= &self.values[e];
        }
        out
    }

    pub fn is_flow(&self, g: &Multigraph) -> bool {
        self.coboundary(g).iter().all(Zero::is_zero)
    }
}

/// Fundamental-cycle basis of the flow space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowBasis {
    pub tree_edges: Vec<EdgeId>,
    pub non_tree_edges: Vec<EdgeId>,
    /// Integer values of each basis flow, indexed by edge.
    pub cycles: Vec<Vec<i64>>,
}

impl FlowBasis {
    pub fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut in_tree = vec![false; g.edge_count()];
        visited[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in g.incident(v) {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((v, e));
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        let depth = g.distances_from(0);
        let mut cycles = Vec::new();
        let mut non_tree_edges = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if in_tree[e] {
                continue;
            }
            let mut c = vec![0i64; g.edge_count()];
            c[e] = 1;
            // close the cycle: tree path from v back to u
            let (mut a, mut b) = (v, u);
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, pe) = parent[a].expect("non-root has parent");
                    // traversing a -> p
                    c[pe] += if g.endpoints(pe) == (a, p) { 1 } else { -1 };
                    a = p;
                } else {
                    let (p, pe) = parent[b].expect("non-root has parent");
                    // traversing p -> b, at the end of the walk
                    c[pe] += if g.endpoints(pe) == (p, b) { 1 } else { -1 };
                    b = p;
                }
            }
            cycles.push(c);
            non_tree_edges.push(e);
        }
        let tree_edges = (0..g.edge_count()).filter(|&e| in_tree[e]).collect();
        FlowBasis { tree_edges, non_tree_edges, cycles }
    }

    pub fn dimension(&self) -> usize {
        self.cycles.len()
    }

    pub fn form(&self, i: usize) -> OneForm {
        OneForm::from_integers(&self.cycles[i])
    }

    /// Coordinates of a flow in this basis.
    pub fn coordinates(&self, omega: &OneForm) -> Vec<BigRational> {
        self.non_tree_edges.iter().map(|&e| omega.values[e].clone()).collect()
    }

    pub fn combine(&self, coords: &[BigRational], m: usize) -> OneForm {
        let mut out = OneForm::zero(m);
        for (c, cycle) in coords.iter().zip(&self.cycles) {
            for (o, &x) in out.values.iter_mut().zip(cycle) {
                *o += c * q(x);
            }
        }
        out
    }

    /// `⟨λ_i, λ_j⟩ = sum over edges of λ_i(e) λ_j(e)`.
    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        self.cycles
            .iter()
            .map(|a| self.cycles.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
            .collect()
    }
}

/// `φ^*ω'(e) = ω'(φ(e))`, zero on collapsed edges.
pub fn pull_form(phi: &HarmonicMorphism, omega: &OneForm) -> OneForm {
    let map = phi.map();
    OneForm::new(
        (0..phi.source().edge_count())
            .map(|e| match map.directed_image(DirectedEdge::new(e, true)) {
                Some(d) => omega.at(d),
                None => BigRational::zero(),
            })
            .collect(),
    )
}

/// `φ_*ω(e') = sum of ω(e) over edges e mapping onto e'`.
pub fn push_form(phi: &HarmonicMorphism, omega: &OneForm) -> OneForm {
    let map = phi.map();
    let mut out = OneForm::zero(phi.target().edge_count());
    for e in 0..phi.source().edge_count() {
        if let Some(d) = map.directed_image(DirectedEdge::new(e, true)) {
            let v = omega.values[e].clone();
            if d.forward {
                out.values[d.edge] += v;
            } else {
                out.values[d.edge] -= v;
            }
        }
    }
    out
}

/// `α^*ω(e) = ω(α(e))`.
pub fn pull_by_automorphism(g: &Multigraph, alpha: &Automorphism, omega: &OneForm) -> OneForm {
    let phi = HarmonicMorphism::new(alpha.to_morphism(g)).expect("automorphisms are harmonic");
    pull_form(&phi, omega)
}

/// Matrix of `α^*` in the basis: column `j` holds the coordinates of
/// `α^*λ_j`, so `matrix(α ∘ β) = matrix(β) · matrix(α)`.
pub fn aut_action_matrix(g: &Multigraph, basis: &FlowBasis, alpha: &Automorphism) -> RatMatrix {
    let k = basis.dimension();
    let columns: Vec<Vec<BigRational>> =
        (0..k).map(|j| basis.coordinates(&pull_by_automorphism(g, alpha, &basis.form(j)))).collect();
    (0..k).map(|i| (0..k).map(|j| columns[j][i].clone()).collect()).collect()
}

fn require_bridgeless_genus2(g: &Multigraph) -> Result<()> {
    if !g.bridges().is_empty() {
        return Err(Error::Hypothesis("graph has a bridge".into()));
    }
    if g.genus() < 2 {
        return Err(Error::Hypothesis("genus is below 2".into()));
    }
    Ok(())
}

/// Only the identity automorphism acts trivially on the flow space.
pub fn aut_faithfulness_check(g: &Multigraph) -> Result<bool> {
    require_bridgeless_genus2(g)?;
    let basis = FlowBasis::new(g);
    let id = linalg::identity(basis.dimension());
    Ok(automorphism::automorphisms(g, automorphism::DEFAULT_LIMIT)?
        .iter()
        .all(|a| a.is_identity() || aut_action_matrix(g, &basis, a) != id))
}

/// The action matrix and its inverse are integral.
pub fn gl_integrality_check(g: &Multigraph, alpha: &Automorphism) -> bool {
    let basis = FlowBasis::new(g);
    let m = aut_action_matrix(g, &basis, alpha);
    let minv = aut_action_matrix(g, &basis, &alpha.inverse());
    let integral = |m: &RatMatrix| m.iter().flatten().all(|x| x.is_integer());
    integral(&m)
        && integral(&minv)
        && linalg::mat_mul(&m, &minv) == linalg::identity(basis.dimension())
        && linalg::rational_determinant(&m).abs().is_one()
}

/// The functional `ω ↦ ω(e)` in basis coordinates, scaled so the first
/// nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<BigRational>,
}

impl Hyperplane {
    fn normalized(row: Vec<BigRational>) -> Option<Hyperplane> {
        let lead = row.iter().find(|x| !x.is_zero())?.clone();
        Some(Hyperplane { normal: row.into_iter().map(|x| x / &lead).collect() })
    }
}

impl std::fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `ψ(e)` for every edge; rejects graphs with a bridge.
pub fn canonical_map(g: &Multigraph) -> Result<Vec<Hyperplane>> {
    if !g.bridges().is_empty() {
        return Err(Error::Hypothesis("canonical map needs a bridgeless graph".into()));
    }
    let basis = FlowBasis::new(g);
    (0..g.edge_count())
        .map(|e| {
            let row = basis.cycles.iter().map(|c| q(c[e])).collect();
            Hyperplane::normalized(row).ok_or_else(|| Error::Hypothesis(format!("edge {e} lies on no cycle")))
        })
        .collect()
}

/// Edges grouped by their hyperplane, groups ordered by smallest edge.
pub fn canonical_fibers(g: &Multigraph) -> Result<Vec<Vec<EdgeId>>> {
    let psi = canonical_map(g)?;
    let mut groups: BTreeMap<&Hyperplane, Vec<EdgeId>> = BTreeMap::new();
    for (e, h) in psi.iter().enumerate() {
        groups.entry(h).or_default().push(e);
    }
    let mut fibers: Vec<Vec<EdgeId>> = groups.into_values().collect();
    fibers.sort();
    Ok(fibers)
}

pub fn is_canonical_injective(g: &Multigraph) -> Result<bool> {
    Ok(canonical_fibers(g)?.iter().all(|f| f.len() == 1))
}
