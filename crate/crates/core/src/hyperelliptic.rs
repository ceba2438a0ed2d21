//! Hyperelliptic graphs: detection by a degree-2 rank scan, construction and
//! verification of the involution, the ±1 action criteria, Weierstrass points
//! and the Weierstrass-free families.
//!
//! The involution is built from a rank-1 divisor `D` of degree 2. Vertex
//! `x` goes to the unique `y` with `D - (x) ~ (y)`. An edge whose ends are
//! swapped is sent to itself. Any other edge `e = uv` is paired through a
//! firing script: with `(u) + (ι u) - (v) - (ι v) = div(f)`, the set where
//! `f` is largest has exactly two boundary edges, `e` and its image.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automorphism::{self, Automorphism};
use crate::divisor::{self, rank, rank_at_least, Divisor};
use crate::enumerate::are_isomorphic;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::forms::{self, FlowBasis};
use crate::graph::{theta, EdgeId, Multigraph, VertexId};
use crate::jacobian::{abel_jacobi, DivisorClass};
use crate::linalg;
use crate::morphism::{quotient, GraphMorphism, HarmonicMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticWitness {
    /// `(x) + (y)` with rank 1.
    pub divisor: Divisor,
    pub involution: Automorphism,
    pub quotient_tree: Multigraph,
    pub quotient_map: GraphMorphism,
}

fn require_bridgeless(g: &Multigraph) -> Result<()> {
    if g.bridges().is_empty() {
        Ok(())
    } else {
        Err(Error::Hypothesis("graph has a bridge; contract bridges first".into()))
    }
}

/// First pair `x <= y` (row-major) with `r((x) + (y)) >= 1`.
pub fn find_g12(g: &Multigraph, exec: Exec) -> Option<Divisor> {
    let n = g.vertex_count();
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let hit = exec
        .position_first(&pairs, |&(x, y)| rank_at_least(g, &Divisor::from_points(n, &[x, y]), 1, Exec::Sequential))?;
    let (x, y) = pairs[hit];
    Some(Divisor::from_points(n, &[x, y]))
}

/// The unique `y` with `D - (x) ~ (y)`.
fn partner(g: &Multigraph, d: &Divisor, x: VertexId) -> Result<VertexId> {
    let n = g.vertex_count();
    let rest = d - &Divisor::point(n, x);
    let mut found = g.vertices().filter(|&y| divisor::is_equivalent(g, &rest, &Divisor::point(n, y)));
    match (found.next(), found.next()) {
        (Some(y), None) => Ok(y),
        _ => Err(Error::NotHyperelliptic),
    }
}

/// The involution determined by a degree-2 rank-1 divisor.
pub fn involution_from_g12(g: &Multigraph, d: &Divisor) -> Result<Automorphism> {
    let n = g.vertex_count();
    let vmap: Vec<VertexId> = g.vertices().map(|x| partner(g, d, x)).collect::<Result<_>>()?;
    let mut emap = vec![usize::MAX; g.edge_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if vmap[u] == v && vmap[v] == u {
            emap[e] = e;
            continue;
        }
        let d1 = Divisor::from_points(n, &[u, vmap[u]]);
        let d2 = Divisor::from_points(n, &[v, vmap[v]]);
        let f = divisor::equivalence_witness(g, &d1, &d2).ok_or(Error::NotHyperelliptic)?;
        let top = *f.values().iter().max().expect("nonempty");
        let high: Vec<bool> = f.values().iter().map(|&x| x == top).collect();
        let cut = g.boundary(&high);
        let others: Vec<EdgeId> = cut.iter().copied().filter(|&c| c != e).collect();
        if cut.len() != 2 || others.len() != 1 {
            return Err(Error::NotHyperelliptic);
        }
        emap[e] = others[0];
    }
    Automorphism::new(g, vmap, emap)
}

/// Re-checks all three characterizations on a witness.
pub fn verify_witness(g: &Multigraph, w: &HyperellipticWitness) -> bool {
    let group = automorphism::generated_by_involution(g, &w.involution);
    let Ok((tree, pi)) = quotient(g, &group) else { return false };
    let degree_ok = match pi.is_harmonic() {
        Some(cert) => cert.degree == 2 || g.vertex_count() == 2,
        None => false,
    };
    w.divisor.degree() == 2
        && rank(g, &w.divisor) == 1
        && w.involution.is_involution()
        && tree.is_tree()
        && tree == w.quotient_tree
        && pi == w.quotient_map
        && degree_ok
}

/// A witness when `G` (bridgeless, genus >= 2) has a degree-2 divisor of
/// rank 1.
pub fn is_hyperelliptic(g: &Multigraph, exec: Exec) -> Result<Option<HyperellipticWitness>> {
    require_bridgeless(g)?;
    if g.genus() < 2 {
        return Ok(None);
    }
    let Some(d) = find_g12(g, exec) else { return Ok(None) };
    let involution = involution_from_g12(g, &d)?;
    let group = automorphism::generated_by_involution(g, &involution);
    let (quotient_tree, quotient_map) = quotient(g, &group)?;
    let w = HyperellipticWitness { divisor: d, involution, quotient_tree, quotient_map };
    debug_assert!(verify_witness(g, &w));
    Ok(Some(w))
}

pub fn hyperelliptic_involution(g: &Multigraph) -> Result<Automorphism> {
    Ok(is_hyperelliptic(g, Exec::Sequential)?.ok_or(Error::NotHyperelliptic)?.involution)
}

fn has_tree_quotient(g: &Multigraph, iota: &Automorphism) -> bool {
    quotient(g, &automorphism::generated_by_involution(g, iota)).is_ok_and(|(t, _)| t.is_tree())
}

/// Exactly one vertex map among all involutions has a tree quotient, and it
/// is the witness's.
pub fn uniqueness_check(g: &Multigraph) -> Result<bool> {
    let iota = hyperelliptic_involution(g)?;
    let tree_vmaps: BTreeSet<Vec<VertexId>> = automorphism::involutions(g, automorphism::DEFAULT_LIMIT)?
        .into_iter()
        .filter(|a| has_tree_quotient(g, a))
        .map(|a| a.vmap().to_vec())
        .collect();
    Ok(tree_vmaps.len() == 1 && tree_vmaps.contains(iota.vmap()))
}

/// The witness involution commutes with every automorphism.
pub fn centrality_check(g: &Multigraph) -> Result<bool> {
    let iota = hyperelliptic_involution(g)?;
    Ok(automorphism::automorphisms(g, automorphism::DEFAULT_LIMIT)?.iter().all(|a| a.compose(&iota) == iota.compose(a)))
}

/// The five conditions of the ±1 characterization for one automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmOneReport {
    /// `ι` is the hyperelliptic involution of the witness.
    pub hyperelliptic_involution: bool,
    pub jac_push_negates: bool,
    pub jac_pull_negates: bool,
    pub forms_push_negates: bool,
    pub forms_pull_negates: bool,
}

impl PmOneReport {
    pub fn agree(&self) -> bool {
        let all = [
            self.hyperelliptic_involution,
            self.jac_push_negates,
            self.jac_pull_negates,
            self.forms_push_negates,
            self.forms_pull_negates,
        ];
        all.iter().all(|&b| b == all[0])
    }
}

pub fn pm_one_report(g: &Multigraph, iota: &Automorphism) -> Result<PmOneReport> {
    require_bridgeless(g)?;
    if g.genus() < 2 {
        return Err(Error::Hypothesis("genus is below 2".into()));
    }
    let witness = is_hyperelliptic(g, Exec::Sequential)?;
    let hyperelliptic_involution = witness.is_some_and(|w| &w.involution == iota);

    let h = HarmonicMorphism::new(iota.to_morphism(g)).expect("automorphisms are harmonic");
    let gens: Vec<DivisorClass> = g.vertices().map(|x| abel_jacobi(g, 0, x)).collect();
    let jac_push_negates = gens.iter().all(|c| h.jac_push(c) == c.neg(g));
    let jac_pull_negates = gens.iter().all(|c| h.jac_pull(c) == c.neg(g));

    let basis = FlowBasis::new(g);
    let minus_one = num::rational::BigRational::from_integer((-1).into());
    let negates = |f: &dyn Fn(&forms::OneForm) -> forms::OneForm| {
        (0..basis.dimension()).all(|i| {
            let w = basis.form(i);
            f(&w) == w.scale(&minus_one)
        })
    };
    let forms_push_negates = negates(&|w| forms::push_form(&h, w));
    let forms_pull_negates = negates(&|w| forms::pull_form(&h, w));
    Ok(PmOneReport {
        hyperelliptic_involution,
        jac_push_negates,
        jac_pull_negates,
        forms_push_negates,
        forms_pull_negates,
    })
}

/// `{x : r(g (x)) >= 1}`.
pub fn weierstrass_points(g: &Multigraph, exec: Exec) -> Vec<VertexId> {
    let n = g.vertex_count();
    let genus = g.genus() as i64;
    let vs: Vec<VertexId> = g.vertices().collect();
    exec.filter_map(&vs, |&x| {
        let d = genus * &Divisor::point(n, x);
        rank_at_least(g, &d, 1, Exec::Sequential).then_some(x)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeierstrassClass {
    BananaUnit(usize),
    OddTripleBanana(usize, usize, usize),
    Theta(usize),
    NotInFamilies,
}

/// Lengths of the internally disjoint paths between the two branch
/// vertices, if `g` is a banana graph with exactly two vertices of degree
/// above 2.
fn banana_lengths(g: &Multigraph) -> Option<Vec<usize>> {
    let branch: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) > 2).collect();
    if branch.len() != 2 || g.vertices().any(|v| g.degree(v) < 2) || g.degree(branch[0]) != g.degree(branch[1]) {
        return None;
    }
    let (x, y) = (branch[0], branch[1]);
    let mut lengths = Vec::new();
    for &(e0, first) in g.incident(x) {
        let (mut prev_edge, mut at, mut len) = (e0, first, 1);
        while at != x && at != y {
            let &(e, w) = g.incident(at).iter().find(|&&(e, _)| e != prev_edge)?;
            prev_edge = e;
            at = w;
            len += 1;
        }
        if at != y {
            return None;
        }
        lengths.push(len);
    }
    // the paths must use every edge
    if lengths.iter().sum::<usize>() != g.edge_count() {
        return None;
    }
    lengths.sort_unstable();
    Some(lengths)
}

/// Recognizes the three Weierstrass-free families; anything with a
/// Weierstrass point is `NotInFamilies`.
pub fn classify_weierstrass_free(g: &Multigraph, exec: Exec) -> Result<WeierstrassClass> {
    require_bridgeless(g)?;
    if is_hyperelliptic(g, exec)?.is_none() {
        return Err(Error::NotHyperelliptic);
    }
    if !weierstrass_points(g, exec).is_empty() {
        return Ok(WeierstrassClass::NotInFamilies);
    }
    Ok(recognize_family(g))
}

/// Family membership alone, ignoring Weierstrass points.
pub fn recognize_family(g: &Multigraph) -> WeierstrassClass {
    if g.vertex_count() == 2 && g.edge_count() >= 3 {
        return WeierstrassClass::BananaUnit(g.edge_count());
    }
    if let Some(l) = banana_lengths(g) {
        if l.len() == 3 && l.iter().all(|x| x % 2 == 1) {
            return WeierstrassClass::OddTripleBanana(l[0], l[1], l[2]);
        }
    }
    let n = g.vertex_count();
    if n >= 4 && n.is_multiple_of(2) && g.edge_count() == n + 2 {
        let l = n / 2 - 1;
        if are_isomorphic(g, &theta(l).expect("l >= 1")) {
            return WeierstrassClass::Theta(l);
        }
    }
    WeierstrassClass::NotInFamilies
}

/// Hyperellipticity agrees on `G` and `σ_k(G)` (after contracting bridges).
pub fn subdivision_invariance_check(g: &Multigraph, k: usize) -> Result<bool> {
    let (a, _) = g.contract_bridges();
    let (b, _) = g.subdivide(k)?.contract_bridges();
    Ok(is_hyperelliptic(&a, Exec::Sequential)?.is_some() == is_hyperelliptic(&b, Exec::Sequential)?.is_some())
}

/// `r_G(D) = r(ρ_*D)` and `D ~ 0` iff `ρ_*D ~ 0`, for the bridge
/// contraction `ρ`.
pub fn bridge_equivalence_check(g: &Multigraph, d: &Divisor) -> bool {
    let (gbar, rho) = g.contract_bridges();
    let mut pushed = Divisor::zero(gbar.vertex_count());
    for (x, &c) in d.coeffs().iter().enumerate() {
        pushed.add_at(rho[x], c);
    }
    let zero = Divisor::zero(g.vertex_count());
    let zero_bar = Divisor::zero(gbar.vertex_count());
    rank(g, d) == rank(&gbar, &pushed)
        && divisor::is_equivalent(g, d, &zero) == divisor::is_equivalent(&gbar, &pushed, &zero_bar)
}

/// The involution swapping the two preimages of each target vertex of a
/// non-degenerate degree-2 harmonic morphism, and the two edges over each
/// target edge; vertical edges go to themselves.
pub fn involution_from_degree_two(phi: &HarmonicMorphism) -> Result<Automorphism> {
    let g = phi.source();
    if phi.degree() != 2 || !phi.is_nondegenerate() {
        return Err(Error::Hypothesis("need a non-degenerate harmonic morphism of degree 2".into()));
    }
    let map = phi.map();
    let mut vmap: Vec<VertexId> = g.vertices().collect();
    for x in g.vertices() {
        if phi.m(x) == 1 {
            let others: Vec<VertexId> = g.vertices().filter(|&z| z != x && map.vmap()[z] == map.vmap()[x]).collect();
            if others.len() != 1 {
                return Err(Error::Hypothesis("fiber of a multiplicity-1 vertex must have two points".into()));
            }
            vmap[x] = others[0];
        }
    }
    let mut emap: Vec<EdgeId> = (0..g.edge_count()).collect();
    for (e, slot) in emap.iter_mut().enumerate() {
        if let crate::morphism::EdgeImage::Edge(j) = map.emap()[e] {
            let (u, v) = g.endpoints(e);
            let others: Vec<EdgeId> = (0..g.edge_count())
                .filter(|&f| f != e && map.emap()[f] == crate::morphism::EdgeImage::Edge(j))
                .collect();
            *slot = match others.as_slice() {
                [f] => *f,
                // both preimage slots on the same edge cannot happen at degree 2
                _ => return Err(Error::Hypothesis(format!("edge {e} ({u},{v}) has no partner"))),
            };
        }
    }
    Automorphism::new(g, vmap, emap)
}

/// Checks `ι ∘ ι = id` and that `π_ι` agrees with `φ` up to relabeling the
/// target: same fibers on vertices and edges.
pub fn round_trip_from_morphism(phi: &HarmonicMorphism) -> Result<bool> {
    let g = phi.source();
    let iota = involution_from_degree_two(phi)?;
    let (_, pi) = quotient(g, &automorphism::generated_by_involution(g, &iota))?;
    let same_fibers =
        |a: &[usize], b: &[usize]| (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])));
    let key = |m: &GraphMorphism| -> Vec<usize> {
        m.emap()
            .iter()
            .map(|im| match *im {
                crate::morphism::EdgeImage::Edge(j) => 2 * j,
                crate::morphism::EdgeImage::Vertex(v) => 2 * v + 1,
            })
            .collect()
    };
    Ok(iota.is_involution()
        && iota.is_mixing(g)
        && same_fibers(pi.vmap(), phi.map().vmap())
        && same_fibers(&key(&pi), &key(phi.map())))
}

/// For a mixing involution on more than two vertices, `π_ι` is a
/// non-degenerate harmonic morphism of degree 2.
pub fn quotient_of_mixing_is_degree_two(g: &Multigraph, iota: &Automorphism) -> Result<bool> {
    if !iota.is_involution() || !iota.is_mixing(g) || g.vertex_count() <= 2 {
        return Err(Error::Hypothesis("need a mixing involution on more than two vertices".into()));
    }
    let (_, pi) = quotient(g, &automorphism::generated_by_involution(g, iota))?;
    Ok(HarmonicMorphism::new(pi).is_ok_and(|h| h.degree() == 2 && h.is_nondegenerate()))
}

/// `ι^*` on the flow space as a matrix.
pub fn involution_matrix(g: &Multigraph, iota: &Automorphism) -> linalg::RatMatrix {
    forms::aut_action_matrix(g, &FlowBasis::new(g), iota)
}
