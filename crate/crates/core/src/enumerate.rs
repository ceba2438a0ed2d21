//! Isomorphism testing by canonical forms, and enumeration of small
//! 2-edge-connected multigraphs up to isomorphism.
//!
//! The canonical form is the lexicographically least sorted edge list over
//! all relabelings that respect a color refinement (initial color = degree,
//! refined by the multiset of neighbor colors and multiplicities). Colors
//! are named by sorted signatures, so the refinement is isomorphism
//! invariant and only permutations inside color classes need trying.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::exec::Exec;
use crate::graph::{Multigraph, VertexId};

/// Vertex count plus the least sorted edge list.
pub type CanonicalForm = (usize, Vec<(VertexId, VertexId)>);

fn refined_colors(g: &Multigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut colors: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    loop {
        let signatures: Vec<(usize, Vec<(usize, usize)>)> = g
            .vertices()
            .map(|v| {
                let mut nbrs: BTreeMap<VertexId, usize> = BTreeMap::new();
                for &(_, w) in g.incident(v) {
                    *nbrs.entry(w).or_default() += 1;
                }
                let mut sig: Vec<(usize, usize)> = nbrs.iter().map(|(&w, &k)| (colors[w], k)).collect();
                sig.sort_unstable();
                (colors[v], sig)
            })
            .collect();
        let distinct: Vec<_> = signatures.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = signatures.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        let old_classes = colors.iter().collect::<BTreeSet<_>>().len();
        if distinct.len() == old_classes || distinct.len() == n {
            return next;
        }
        colors = next;
    }
}

pub fn canonical_form(g: &Multigraph) -> CanonicalForm {
    let colors = refined_colors(g);
    let mut classes: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        classes.entry(colors[v]).or_default().push(v);
    }
    // labels are handed out class by class in color order
    let blocks: Vec<Vec<VertexId>> = classes.into_values().collect();
    let mut best: Option<Vec<(VertexId, VertexId)>> = None;
    let per_block: Vec<Vec<Vec<VertexId>>> =
        blocks.iter().map(|b| b.iter().copied().permutations(b.len()).collect()).collect();
    let mut label = vec![0usize; g.vertex_count()];
    for choice in per_block.iter().map(|p| p.iter()).multi_cartesian_product() {
        let mut next = 0;
        for order in choice {
            for &v in order {
                label[v] = next;
                next += 1;
            }
        }
        let mut edges: Vec<(VertexId, VertexId)> =
            g.edges().iter().map(|&(u, v)| (label[u].min(label[v]), label[u].max(label[v]))).collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
    }
    (g.vertex_count(), best.unwrap_or_default())
}

pub fn are_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

fn admissible(n: usize, edges: &[(VertexId, VertexId)]) -> Option<Multigraph> {
    let mut degree = vec![0usize; n];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    if degree.iter().any(|&d| d < 2) {
        return None;
    }
    let g = Multigraph::new(n, edges.to_vec()).ok()?;
    g.bridges().is_empty().then_some(g)
}

/// Every 2-edge-connected multigraph with `2 <= |V|` and `|E| <= max_edges`,
/// one per isomorphism class, ordered by (|E|, canonical form).
pub fn two_edge_connected_multigraphs(max_edges: usize, exec: Exec) -> Vec<Multigraph> {
    let mut forms: BTreeSet<(usize, CanonicalForm)> = BTreeSet::new();
    for m in 2..=max_edges {
        // minimum degree 2 forces |V| <= |E|
        for n in 2..=m {
            let pairs: Vec<(VertexId, VertexId)> = (0..n).tuple_combinations().collect();
            let firsts: Vec<usize> = (0..pairs.len()).collect();
            let found = exec.map(&firsts, |&first| {
                let mut out = BTreeSet::new();
                let mut chosen = vec![first];
                grow(&pairs, n, m, &mut chosen, &mut out);
                out
            });
            for set in found {
                forms.extend(set.into_iter().map(|f| (m, f)));
            }
        }
    }
    forms.into_iter().map(|(_, (n, edges))| Multigraph::new(n, edges).expect("canonical forms are valid")).collect()
}

/// Extends a nondecreasing list of pair indices to length `m`.
fn grow(
    pairs: &[(VertexId, VertexId)],
    n: usize,
    m: usize,
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<CanonicalForm>,
) {
    if chosen.len() == m {
        let edges: Vec<_> = chosen.iter().map(|&i| pairs[i]).collect();
        if let Some(g) = admissible(n, &edges) {
            out.insert(canonical_form(&g));
        }
        return;
    }
    let last = *chosen.last().expect("nonempty");
    for i in last..pairs.len() {
        chosen.push(i);
        grow(pairs, n, m, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{banana, banana_unit, complete, cycle, theta};

    #[test]
    fn isomorphism() {
        let a = banana(&[1, 2, 3]).unwrap();
        let b = banana(&[3, 1, 2]).unwrap();
        assert!(are_isomorphic(&a, &b));
        assert!(!are_isomorphic(&a, &banana(&[2, 2, 2]).unwrap()));
        let relabeled = Multigraph::new(4, vec![(3, 2), (2, 1), (1, 0), (0, 3)]).unwrap();
        assert!(are_isomorphic(&cycle(4).unwrap(), &relabeled));
        assert!(are_isomorphic(&theta(1).unwrap(), &theta(1).unwrap().subdivide(1).unwrap()));
        assert!(!are_isomorphic(&theta(1).unwrap(), &complete(4).unwrap()));
    }

    #[test]
    fn small_counts() {
        // up to 3 edges: B2, B3, C3
        let gs = two_edge_connected_multigraphs(3, Exec::Sequential);
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().any(|g| are_isomorphic(g, &banana_unit(3).unwrap())));
        assert_eq!(
            two_edge_connected_multigraphs(5, Exec::Parallel),
            two_edge_connected_multigraphs(5, Exec::Sequential)
        );
    }
}
