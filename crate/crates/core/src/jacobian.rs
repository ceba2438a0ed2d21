//! The Jacobian group, spanning-tree counts, Abel–Jacobi maps, and the
//! parity criterion: `κ_G` is even exactly when there is an Eulerian cut,
//! a half-integral flow that pairs integrally with all integral flows, and a
//! non-constant harmonic morphism onto two vertices joined by two edges.

use std::collections::{BTreeSet, VecDeque};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One};
use serde::{Deserialize, Serialize};

use crate::divisor::{self, effective_divisors, Divisor};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::forms::{FlowBasis, OneForm};
use crate::graph::{banana_unit, Cut, Multigraph, VertexId};
use crate::linalg;
use crate::morphism::{EdgeImage, GraphMorphism};

/// Default cap on explicitly enumerated group elements.
pub const DEFAULT_GROUP_BOUND: usize = 5000;

/// Size cap for the Abel–Jacobi injectivity enumeration.
pub const SK_MAX_VERTICES: usize = 12;

/// Laplacian with the row and column of vertex 0 deleted.
pub fn reduced_laplacian(g: &Multigraph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0i64; n.saturating_sub(1)]; n.saturating_sub(1)];
    for &(u, v) in g.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if a > 0 {
                m[a - 1][a - 1] += 1;
                if b > 0 {
                    m[a - 1][b - 1] -= 1;
                }
            }
        }
    }
    m
}

/// `κ_G` by an exact determinant.
pub fn spanning_tree_count(g: &Multigraph) -> BigInt {
    linalg::determinant(&linalg::to_big(&reduced_laplacian(g)))
}

/// `Jac(G) ≅ ⊕ ℤ/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianStructure {
    /// All Smith diagonal entries, leading ones included.
    pub invariant_factors: Vec<BigInt>,
    pub order: BigInt,
}

impl JacobianStructure {
    pub fn of(g: &Multigraph) -> Self {
        let invariant_factors = linalg::smith_diagonal(&linalg::to_big(&reduced_laplacian(g)));
        let order = invariant_factors.iter().product();
        JacobianStructure { invariant_factors, order }
    }

    /// Invariant factors other than 1.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// An element of `Jac(G)`, held as its 0-reduced representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    representative: Divisor,
}

impl DivisorClass {
    /// Class of a degree-0 divisor.
    pub fn of(g: &Multigraph, d: &Divisor) -> Self {
        debug_assert_eq!(d.degree(), 0);
        DivisorClass { representative: divisor::reduce(g, d, 0).divisor }
    }

    pub fn zero(g: &Multigraph) -> Self {
        DivisorClass { representative: Divisor::zero(g.vertex_count()) }
    }

    pub fn representative(&self) -> &Divisor {
        &self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    pub fn add(&self, g: &Multigraph, other: &DivisorClass) -> DivisorClass {
        DivisorClass::of(g, &(&self.representative + &other.representative))
    }

    pub fn neg(&self, g: &Multigraph) -> DivisorClass {
        DivisorClass::of(g, &-&self.representative)
    }

    /// Order of the class; at most `κ_G`.
    pub fn order(&self, g: &Multigraph) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_zero() {
            acc = acc.add(g, self);
            k += 1;
        }
        k
    }
}

/// `S_{x0}(x) = [(x) - (x0)]`.
pub fn abel_jacobi(g: &Multigraph, x0: VertexId, x: VertexId) -> DivisorClass {
    let n = g.vertex_count();
    DivisorClass::of(g, &(&Divisor::point(n, x) - &Divisor::point(n, x0)))
}

/// `S^(k)(x_1 + ... + x_k) = sum of S_{x0}(x_i)`.
pub fn symmetric_power(g: &Multigraph, x0: VertexId, points: &[VertexId]) -> DivisorClass {
    let n = g.vertex_count();
    let e = Divisor::from_points(n, points);
    DivisorClass::of(g, &(&e - &(points.len() as i64 * &Divisor::point(n, x0))))
}

/// Whether `S^(k)` is injective, by comparing the classes of all effective
/// degree-`k` divisors.
pub fn sk_injectivity(g: &Multigraph, k: usize, exec: Exec) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if g.vertex_count() > SK_MAX_VERTICES {
        return Err(Error::BudgetExceeded { what: "vertices for S^(k) enumeration".into(), limit: SK_MAX_VERTICES });
    }
    let all: Vec<Vec<VertexId>> = effective_divisors(g.vertex_count(), k).collect();
    let images = exec.map(&all, |e| symmetric_power(g, 0, e));
    let distinct: BTreeSet<&DivisorClass> = images.iter().collect();
    Ok(distinct.len() == images.len())
}

/// Subgroup generated by `gens`, listed breadth-first from 0.
pub fn closure(g: &Multigraph, gens: &[DivisorClass], bound: usize) -> Result<Vec<DivisorClass>> {
    let mut seen: BTreeSet<DivisorClass> = BTreeSet::new();
    let mut order = Vec::new();
    let zero = DivisorClass::zero(g);
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(c) = queue.pop_front() {
        order.push(c.clone());
        for s in gens {
            let next = c.add(g, s);
            if seen.insert(next.clone()) {
                if seen.len() > bound {
                    return Err(Error::BudgetExceeded { what: "Jacobian elements".into(), limit: bound });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Every element of `Jac(G)`, generated by the `S_0(x)`.
pub fn enumerate_group(g: &Multigraph, bound: usize) -> Result<Vec<DivisorClass>> {
    let gens: Vec<DivisorClass> = g.vertices().skip(1).map(|x| abel_jacobi(g, 0, x)).collect();
    closure(g, &gens, bound)
}

/// A flow with values in `½ℤ`, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfIntegerFlow {
    pub doubled: Vec<i64>,
}

impl HalfIntegerFlow {
    pub fn form(&self) -> OneForm {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        OneForm::from_integers(&self.doubled).scale(&half)
    }

    /// Flow, not integral, and integral pairing with every basis cycle.
    pub fn verify(&self, g: &Multigraph) -> bool {
        let basis = FlowBasis::new(g);
        self.form().is_flow(g)
            && self.doubled.iter().any(|x| x.is_odd())
            && basis.cycles.iter().all(|c| c.iter().zip(&self.doubled).map(|(a, b)| a * b).sum::<i64>().is_even())
    }
}

/// A 2-torsion witness `ω = μ / 2`, from a mod-2 kernel vector of the Gram
/// matrix of the fundamental cycles.
pub fn two_torsion_flow(g: &Multigraph) -> Option<HalfIntegerFlow> {
    let basis = FlowBasis::new(g);
    let c = linalg::kernel_vector_mod2(&basis.gram_matrix())?;
    let mut mu = vec![0i64; g.edge_count()];
    for (ci, cycle) in c.iter().zip(&basis.cycles) {
        if *ci == 1 {
            for (m, x) in mu.iter_mut().zip(cycle) {
                *m += x;
            }
        }
    }
    Some(HalfIntegerFlow { doubled: mu })
}

/// Nonempty cut with every vertex on an even number of cut edges.
pub fn is_eulerian_cut(g: &Multigraph, cut: &Cut) -> bool {
    let side = cut.side_flags(g.vertex_count());
    let boundary = g.boundary(&side);
    !boundary.is_empty()
        && g.vertices().all(|x| g.incident(x).iter().filter(|&&(_, w)| side[w] != side[x]).count() % 2 == 0)
        && boundary == cut.edges
}

/// The cut carried by the odd edges of a 2-torsion flow; the side holding
/// vertex 0 is the set reached from 0 across an even number of odd edges.
pub fn eulerian_cut(g: &Multigraph) -> Option<Cut> {
    let omega = two_torsion_flow(g)?;
    let odd: Vec<bool> = omega.doubled.iter().map(|x| x.is_odd()).collect();
    let mut parity: Vec<Option<bool>> = vec![None; g.vertex_count()];
    parity[0] = Some(false);
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let p = parity[v].expect("visited");
        for &(e, w) in g.incident(v) {
            if parity[w].is_none() {
                parity[w] = Some(p ^ odd[e]);
                queue.push_back(w);
            }
        }
    }
    let side: Vec<VertexId> = g.vertices().filter(|&v| parity[v] == Some(false)).collect();
    let cut = Cut::from_side(g, &side).expect("odd edges form a nonempty cut");
    debug_assert!(cut.edges.iter().all(|&e| odd[e]) && cut.edges.len() == odd.iter().filter(|&&o| o).count());
    Some(cut)
}

/// A non-constant harmonic morphism onto the two-edge banana, built from an
/// Eulerian cut: each closed trail of cut edges alternates between the two
/// target edges.
pub fn morphism_to_b2(g: &Multigraph) -> Option<GraphMorphism> {
    let cut = eulerian_cut(g)?;
    let side = cut.side_flags(g.vertex_count());
    let mut in_cut = vec![false; g.edge_count()];
    for &e in &cut.edges {
        in_cut[e] = true;
    }
    let mut used = vec![false; g.edge_count()];
    let mut label = vec![0usize; g.edge_count()];
    for &start in &cut.edges {
        if used[start] {
            continue;
        }
        // closed trail from one end of `start`; even cut degrees guarantee
        // the walk can only stop where it began
        let (origin, mut at) = g.endpoints(start);
        used[start] = true;
        label[start] = 0;
        let mut parity = 1;
        while at != origin {
            let &(e, w) = g.incident(at).iter().find(|&&(e, _)| in_cut[e] && !used[e]).expect("even cut degree");
            used[e] = true;
            label[e] = parity;
            parity ^= 1;
            at = w;
        }
        debug_assert_eq!(parity, 0, "cut trails have even length");
    }
    let vmap = g.vertices().map(|v| usize::from(!side[v])).collect();
    let emap = (0..g.edge_count())
        .map(|e| {
            if in_cut[e] {
                EdgeImage::Edge(label[e])
            } else {
                EdgeImage::Vertex(usize::from(!side[g.endpoints(e).0]))
            }
        })
        .collect();
    Some(GraphMorphism::new(g.clone(), banana_unit(2).expect("B2"), vmap, emap).expect("valid by construction"))
}
