//! First cohomology of the Anderson-Putnam graph and the substitution action
//! on its rational direct limit.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    charpoly_rat_matrix, minpoly_rat_matrix, reduced_resultant, resultant, solve, BezoutWitness,
    IntMatrix, IntPoly, RatMatrix, RatVector,
};
use crate::language::{anchored_count_vector, collar, min_order, BlockSystem, Letter, Word};
use crate::substitution::Substitution;

/// The one-dimensional Anderson-Putnam complex of a collared alphabet: one
/// edge per collared letter, vertices glued along legal adjacencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APGraph {
    tail: Vec<usize>,
    head: Vec<usize>,
    vertices: usize,
    tree: Vec<bool>,
    non_tree: Vec<usize>,
    /// Tree edges in discovery order, with whether the new vertex is the head.
    order: Vec<(usize, bool)>,
}

impl APGraph {
    pub fn edge_count(&self) -> usize {
        self.tail.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// `E - V + 1`.
    pub fn h1_dim(&self) -> usize {
        self.non_tree.len()
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree[e]
    }

    /// Edges outside the spanning tree; their indicators form the H¹ basis.
    pub fn non_tree_edges(&self) -> &[usize] {
        &self.non_tree
    }

    /// Vertex potentials `g` with `g(root) = 0` and `f = dg` on tree edges.
    pub fn potentials<T: Num + Clone>(&self, f: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); self.vertices];
        for &(e, to_head) in &self.order {
            if to_head {
                g[self.head[e]] = g[self.tail[e]].clone() + f[e].clone();
            } else {
                g[self.tail[e]] = g[self.head[e]].clone() - f[e].clone();
            }
        }
        g
    }

    /// Coordinates of the class of the edge cochain `f` in the non-tree basis.
    pub fn h1_coords<T: Num + Clone>(&self, f: &[T]) -> Vec<T> {
        let g = self.potentials(f);
        self.non_tree
            .iter()
            .map(|&e| f[e].clone() - (g[self.head[e]].clone() - g[self.tail[e]].clone()))
            .collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Glue endpoints and pick a breadth-first spanning tree from the vertex
/// holding the left end of the least collared letter.
pub fn build_ap_graph(bs: &BlockSystem) -> Result<APGraph> {
    let e = bs.len();
    // endpoint 2c is the left end of c, 2c+1 its right end
    let mut uf = UnionFind((0..2 * e).collect());
    for &(a, b) in bs.adjacencies() {
        uf.union(2 * a + 1, 2 * b);
    }
    let mut vertex_of_root = vec![usize::MAX; 2 * e];
    let mut vertices = 0;
    for x in 0..2 * e {
        let r = uf.find(x);
        if vertex_of_root[r] == usize::MAX {
            vertex_of_root[r] = vertices;
            vertices += 1;
        }
    }
    let tail: Vec<usize> = (0..e).map(|c| vertex_of_root[uf.find(2 * c)]).collect();
    let head: Vec<usize> = (0..e).map(|c| vertex_of_root[uf.find(2 * c + 1)]).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    for c in 0..e {
        incident[tail[c]].push(c);
        if head[c] != tail[c] {
            incident[head[c]].push(c);
        }
    }
    let mut seen = vec![false; vertices];
    let mut tree = vec![false; e];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    if vertices > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        for &c in &incident[v] {
            let (w, to_head) = if tail[c] == v {
                (head[c], true)
            } else {
                (tail[c], false)
            };
            if !seen[w] {
                seen[w] = true;
                tree[c] = true;
                order.push((c, to_head));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Disconnected);
    }
    let non_tree = (0..e).filter(|&c| !tree[c]).collect();
    Ok(APGraph {
        tail,
        head,
        vertices,
        tree,
        non_tree,
        order,
    })
}

/// Pullback of the induced substitution on H¹, in the non-tree-edge basis.
pub fn h1_action(bs: &BlockSystem, g: &APGraph) -> Result<IntMatrix> {
    for c in 0..bs.len() {
        let img = bs.image(c);
        if img.windows(2).any(|p| g.head(p[0]) != g.tail(p[1])) {
            return Err(Error::Internal(format!(
                "image of collared letter {c} is not an edge path"
            )));
        }
    }
    let basis = g.non_tree_edges();
    let dim = basis.len();
    let m = bs.matrix();
    let mut a0 = IntMatrix::zeros(dim, dim);
    for (j, &ej) in basis.iter().enumerate() {
        let cochain: Vec<BigInt> = (0..bs.len()).map(|c| m.get(ej, c).clone()).collect();
        for (i, v) in g.h1_coords(&cochain).into_iter().enumerate() {
            a0.set(i, j, v);
        }
    }
    Ok(a0)
}

/// The substitution action on the rational direct limit of H¹, with the
/// polynomial data derived from it.
#[derive(Clone, Debug)]
pub struct CohomologyPresentation {
    pub substitution: Substitution,
    pub block_system: BlockSystem,
    pub graph: APGraph,
    pub a0: IntMatrix,
    /// Columns span the eventual image of `a0`.
    pub basis: RatMatrix,
    pub k: usize,
    pub a: RatMatrix,
    pub p: IntPoly,
    pub q: IntPoly,
    pub r: IntPoly,
    pub witness: BezoutWitness,
    a_inv: RatMatrix,
    /// `A^{-N} . coords . A0^N`: H¹ coordinates to eventual-image coordinates.
    projector: RatMatrix,
}

/// Collar radius used when no patch length dictates one.
pub const DEFAULT_COLLAR_RADIUS: usize = 1;

/// Rank of the rational direct limit, at the default collar radius.
pub fn cohomology_rank(s: &Substitution) -> Result<usize> {
    Ok(action_polynomials(s)?.k)
}

pub fn action_polynomials(s: &Substitution) -> Result<CohomologyPresentation> {
    presentation(s, DEFAULT_COLLAR_RADIUS)
}

/// Full presentation at collar radius `m`.
pub fn presentation(s: &Substitution, m: usize) -> Result<CohomologyPresentation> {
    let pd = s.perron_data()?;
    let bs = collar(s, m)?;
    let graph = build_ap_graph(&bs)?;
    let a0 = h1_action(&bs, &graph)?;
    let dim = a0.rows();
    let basis = crate::exactalg::eventual_image(&a0)?;
    let k = basis.cols();
    let a0r = a0.to_rat();
    let brows = basis.to_rows();
    let zero = BigRational::zero();
    let coords_in_basis = |v: &[BigRational]| -> Result<Vec<BigRational>> {
        solve(&brows, v, &zero)
            .ok_or_else(|| Error::Internal("vector outside the eventual image".into()))
    };
    let image = a0r.mul(&basis);
    let mut a = RatMatrix::zeros(k, k);
    for j in 0..k {
        for (i, x) in coords_in_basis(&image.column(j))?.into_iter().enumerate() {
            a.set(i, j, x);
        }
    }
    let a_inv = a
        .inverse()
        .ok_or_else(|| Error::Internal("action on the eventual image is singular".into()))?;
    let p = minpoly_rat_matrix(&a)?;
    let q = pd.q.clone();
    let r = p
        .div_exact(&q)
        .ok_or_else(|| Error::Internal(format!("q = {q} does not divide p = {p}")))?;
    let witness = reduced_resultant(&q, &r)?;

    let a0n = a0r.pow(dim as u32);
    let mut coords = RatMatrix::zeros(k, dim);
    for j in 0..dim {
        for (i, x) in coords_in_basis(&a0n.column(j))?.into_iter().enumerate() {
            coords.set(i, j, x);
        }
    }
    let projector = a_inv.pow(dim as u32).mul(&coords);
    Ok(CohomologyPresentation {
        substitution: s.clone(),
        block_system: bs,
        graph,
        a0,
        basis,
        k,
        a,
        p,
        q,
        r,
        witness,
        a_inv,
        projector,
    })
}

impl CohomologyPresentation {
    pub fn dim(&self) -> usize {
        self.a0.rows()
    }

    pub fn d(&self) -> &BigInt {
        &self.witness.d
    }

    pub fn resultant(&self) -> Result<BigInt> {
        resultant(&self.q, &self.r)
    }

    pub fn charpoly(&self) -> Result<IntPoly> {
        charpoly_rat_matrix(&self.a)
    }

    pub fn a_inverse(&self) -> &RatMatrix {
        &self.a_inv
    }

    /// Class of an edge cochain read at substitution order `order`,
    /// normalized back to order zero.
    pub fn class_of_cochain(&self, cochain: &[BigInt], order: u32) -> RatVector {
        let h: Vec<BigRational> = self
            .graph
            .h1_coords(cochain)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let mut y = self.projector.mul_vec(&h);
        for _ in 0..order {
            y = self.a_inv.mul_vec(&y);
        }
        y
    }

    /// The eventual-image coordinates as an H¹ vector in the non-tree basis.
    pub fn lift(&self, y: &[BigRational]) -> RatVector {
        self.basis.mul_vec(y)
    }
}

/// Coordinates of `[chi_P]` in the eventual-image basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchClass {
    pub patch: Word,
    pub coords: RatVector,
}

pub fn patch_class(p: &[Letter], pres: &CohomologyPresentation) -> Result<PatchClass> {
    let s = &pres.substitution;
    let bs = &pres.block_system;
    let n0 = min_order(s, p.len());
    let v = anchored_count_vector(s, p, bs, n0)?;
    Ok(PatchClass {
        patch: Word::from(p),
        coords: pres.class_of_cochain(&v.values, n0),
    })
}

/// `x^0, ..., x^{deg}` evaluated at `A`, combined with the coefficients of `f`.
pub fn poly_at(f: &IntPoly, a: &RatMatrix) -> RatMatrix {
    f.eval_matrix(a)
}

/// `dim ker f(A)` over the rationals.
pub fn kernel_dim(f: &IntPoly, a: &RatMatrix) -> usize {
    a.rows() - poly_at(f, a).rank()
}

/// `D.I - Q(A)q(A) - R(A)r(A)`, which must vanish.
pub fn bezout_defect(pres: &CohomologyPresentation) -> RatMatrix {
    let w = &pres.witness;
    let lhs = RatMatrix::identity(pres.k).scale(&BigRational::from_integer(w.d.clone()));
    let qq = poly_at(&(&w.q_coeff * &pres.q), &pres.a);
    let rr = poly_at(&(&w.r_coeff * &pres.r), &pres.a);
    let neg = BigRational::from_integer(-BigInt::one());
    lhs.add(&qq.scale(&neg)).add(&rr.scale(&neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::parse_substitution;

    fn tm() -> Substitution {
        parse_substitution("a -> a b\nb -> b a").unwrap()
    }

    #[test]
    fn graph_shapes() {
        let bs = collar(&tm(), 1).unwrap();
        let g = build_ap_graph(&bs).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.h1_dim(), g.edge_count() + 1 - g.vertex_count());
        assert!(g.h1_dim() >= 2);

        let loop_sub = parse_substitution("a -> a a").unwrap();
        let bs = collar(&loop_sub, 1).unwrap();
        let g = build_ap_graph(&bs).unwrap();
        assert_eq!((g.edge_count(), g.vertex_count(), g.h1_dim()), (1, 1, 1));
        assert_eq!(
            h1_action(&bs, &g).unwrap(),
            IntMatrix::from_i64_rows(&[vec![2]]).unwrap()
        );
    }

    #[test]
    fn coboundaries_vanish() {
        let bs = collar(&tm(), 2).unwrap();
        let g = build_ap_graph(&bs).unwrap();
        let vals: Vec<BigInt> = (0..g.vertex_count())
            .map(|v| BigInt::from(v * v + 3))
            .collect();
        let cob: Vec<BigInt> = (0..g.edge_count())
            .map(|e| &vals[g.head(e)] - &vals[g.tail(e)])
            .collect();
        assert!(g.h1_coords(&cob).iter().all(Zero::is_zero));
    }

    #[test]
    fn thue_morse_presentation() {
        let pres = action_polynomials(&tm()).unwrap();
        assert_eq!(pres.k, 2);
        assert_eq!(pres.p, IntPoly::from_i64s(&[-2, -1, 1]));
        assert_eq!(pres.q, IntPoly::from_i64s(&[-2, 1]));
        assert_eq!(pres.r, IntPoly::from_i64s(&[1, 1]));
        assert_eq!(pres.d(), &BigInt::from(3));
        assert!(bezout_defect(&pres).is_zero_matrix());
        assert_eq!(kernel_dim(&pres.q, &pres.a), 1);
    }

    #[test]
    fn rank_is_stable_in_radius() {
        let fib = parse_substitution("a -> b a a a b\nb -> a b a").unwrap();
        for m in 1..=3 {
            assert_eq!(presentation(&fib, m).unwrap().k, 3);
        }
    }

    #[test]
    fn classes_and_naturality() {
        let s = tm();
        let pres = presentation(&s, 6).unwrap();
        let ab = patch_class(&s.word("ab").unwrap(), &pres).unwrap();
        let aa = patch_class(&s.word("aa").unwrap(), &pres).unwrap();
        let p3 = patch_class(&s.word("aababb").unwrap(), &pres).unwrap();
        // chi_aababb counts 2k1 - k2 on order-4 supertiles of return words,
        // while chi_ab and chi_aa count 6k1 - k2 and 2k1 + k2.
        let half = BigRational::new(1.into(), 2.into());
        let expect: Vec<BigRational> = (0..2)
            .map(|i| &half * &ab.coords[i] - &half * &aa.coords[i])
            .collect();
        assert_eq!(p3.coords, expect);

        let w = s.word("abba").unwrap();
        let n0 = min_order(&s, w.len());
        let v1 = anchored_count_vector(&s, &w, &pres.block_system, n0 + 1).unwrap();
        let c = patch_class(&w, &pres).unwrap();
        assert_eq!(
            pres.class_of_cochain(&v1.values, n0),
            pres.a.mul_vec(&c.coords)
        );
    }

    #[test]
    fn patch_longer_than_collar_is_rejected() {
        let s = tm();
        let pres = presentation(&s, 1).unwrap();
        assert!(matches!(
            patch_class(&s.word("abb").unwrap(), &pres),
            Err(Error::CollarTooSmall { .. })
        ));
    }
}
