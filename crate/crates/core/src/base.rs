//! Finite-graph base spaces, their points, and identifications between them.
//!
//! Every edge has unit length and is parameterized by `(0, 1)` running from
//! its lower-numbered endpoint to its higher-numbered one. Endpoints are
//! always represented as vertices, so point representation is unique.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::num::{qi, Pq, Rational};
use crate::pl::PlHomeo;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BaseError {
    #[error("a base needs at least one vertex")]
    NoVertices,
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) appears twice")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) references a missing vertex")]
    VertexOutOfRange(usize, usize),
    #[error("point does not belong to this base")]
    WrongGraph,
    #[error("edge reparameterization is not piecewise linear")]
    NonPL,
    #[error("vertex map is not a bijection carrying edges to edges")]
    NotIsomorphism,
    #[error("edge reparameterization must be an increasing map of [0, 1] onto itself")]
    BadReparam,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Point-count classes of a base: one, two, or at least three points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    One,
    Two,
    AtLeastThree,
}

impl BaseGraph {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self, BaseError> {
        if vertices == 0 {
            return Err(BaseError::NoVertices);
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= vertices || b >= vertices {
                return Err(BaseError::VertexOutOfRange(a, b));
            }
            if a == b {
                return Err(BaseError::SelfLoop(a, b));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(BaseError::DuplicateEdge(a, b));
            }
            normalized.push(e);
        }
        Ok(BaseGraph {
            vertices,
            edges: normalized,
        })
    }

    pub fn discrete(vertices: usize) -> Result<Self, BaseError> {
        BaseGraph::new(vertices, &[])
    }

    /// The cycle `C_n` with edges `(i, i+1 mod n)`.
    pub fn cycle(n: usize) -> Result<Self, BaseError> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BaseGraph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_discrete(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let e = (a.min(b), a.max(b));
        self.edges.iter().position(|x| *x == e)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().enumerate().filter_map(move |(i, &(a, b))| {
            if a == v {
                Some((i, b))
            } else if b == v {
                Some((i, a))
            } else {
                None
            }
        })
    }

    pub fn cardinality(&self) -> Cardinality {
        if !self.is_discrete() {
            return Cardinality::AtLeastThree;
        }
        match self.vertices {
            1 => Cardinality::One,
            2 => Cardinality::Two,
            _ => Cardinality::AtLeastThree,
        }
    }

    /// Component label per vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = alloc::vec![usize::MAX; self.vertices];
        let mut next = 0;
        for start in 0..self.vertices {
            if label[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            label[start] = next;
            while let Some(v) = queue.pop_front() {
                for (_, w) in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Vertex order around the cycle if the graph is a single cycle of
    /// length at least 3.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices;
        if n < 3 || self.edges.len() != n {
            return None;
        }
        if (0..n).any(|v| self.neighbors(v).count() != 2) {
            return None;
        }
        let mut order = alloc::vec![0];
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            let next = self
                .neighbors(cur)
                .map(|(_, w)| w)
                .find(|&w| w != prev)
                .expect("degree two");
            if next == 0 {
                break;
            }
            order.push(next);
            prev = cur;
            cur = next;
            if order.len() > n {
                return None;
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn contains(&self, p: &BasePoint) -> bool {
        match p {
            BasePoint::Vertex(v) => *v < self.vertices,
            BasePoint::Edge { edge, t } => {
                *edge < self.edges.len() && t.is_positive() && *t < Rational::one()
            }
        }
    }

    /// Point on edge `e` at parameter `t ∈ [0, 1]`, canonicalized.
    pub fn point_on_edge(&self, e: usize, t: Rational) -> BasePoint {
        let (a, b) = self.edges[e];
        if t.is_zero() {
            BasePoint::Vertex(a)
        } else if t.is_one() {
            BasePoint::Vertex(b)
        } else {
            BasePoint::Edge { edge: e, t }
        }
    }

    /// All vertices followed by `m` equally spaced interior points `i/(m+1)`
    /// on each edge.
    pub fn sample_points(&self, m: usize) -> Vec<BasePoint> {
        let mut out: Vec<BasePoint> = (0..self.vertices).map(BasePoint::Vertex).collect();
        let denom = m as i64 + 1;
        for e in 0..self.edges.len() {
            for i in 1..=m as i64 {
                out.push(BasePoint::Edge {
                    edge: e,
                    t: Rational::new(i.into(), denom.into()),
                });
            }
        }
        out
    }

    fn vertex_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = alloc::vec![None; self.vertices];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("visited");
            for (_, w) in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Anchors of a point: `(vertex, distance from point to that vertex)`.
    fn anchors(&self, p: &BasePoint) -> Vec<(usize, Rational)> {
        match p {
            BasePoint::Vertex(v) => alloc::vec![(*v, Rational::zero())],
            BasePoint::Edge { edge, t } => {
                let (a, b) = self.edges[*edge];
                alloc::vec![(a, t.clone()), (b, Rational::one() - t)]
            }
        }
    }

    /// Geodesic distance with unit edges; `None` across components.
    pub fn distance(&self, p: &BasePoint, r: &BasePoint) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        if let (BasePoint::Edge { edge: e1, t: t1 }, BasePoint::Edge { edge: e2, t: t2 }) = (p, r) {
            if e1 == e2 {
                best = Some((t1 - t2).abs());
            }
        }
        for (u, du) in self.anchors(p) {
            let dist = self.vertex_distances(u);
            for (w, dw) in self.anchors(r) {
                if let Some(k) = dist[w] {
                    let d = &du + qi(k as i64) + &dw;
                    best = Some(match best {
                        Some(b) if b <= d => b,
                        _ => d,
                    });
                }
            }
        }
        best
    }

    /// A walk of base points from `from` to `to` through vertices (each
    /// consecutive pair shares a cell), or `None` when disconnected.
    pub fn walk(&self, from: &BasePoint, to: &BasePoint) -> Option<Vec<BasePoint>> {
        if from == to {
            return Some(alloc::vec![from.clone()]);
        }
        if let (BasePoint::Edge { edge: e1, .. }, BasePoint::Edge { edge: e2, .. }) = (from, to) {
            if e1 == e2 {
                return Some(alloc::vec![from.clone(), to.clone()]);
            }
        }
        let starts = self.anchors(from);
        let ends = self.anchors(to);
        let mut best: Option<Vec<usize>> = None;
        for (s, _) in &starts {
            let path = self.vertex_path(*s, &ends.iter().map(|(v, _)| *v).collect::<Vec<_>>());
            if let Some(path) = path {
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
        let verts = best?;
        let mut out = alloc::vec![from.clone()];
        for v in verts {
            let p = BasePoint::Vertex(v);
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        if out.last() != Some(to) {
            out.push(to.clone());
        }
        Some(out)
    }

    fn vertex_path(&self, src: usize, targets: &[usize]) -> Option<Vec<usize>> {
        let mut parent = alloc::vec![usize::MAX; self.vertices];
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            if targets.contains(&v) {
                let mut path = alloc::vec![v];
                let mut cur = v;
                while cur != src {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for (_, w) in self.neighbors(v) {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// A point of a base graph: a vertex or an interior point of an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePoint {
    Vertex(usize),
    Edge { edge: usize, t: Rational },
}

impl BasePoint {
    pub fn edge(edge: usize, t: Rational) -> Self {
        BasePoint::Edge { edge, t }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Vertex(v) => write!(f, "v{v}"),
            BasePoint::Edge { edge, t } => write!(f, "e{edge}@{}", Pq(t)),
        }
    }
}

/// Edge reparameterizations offered to [`BaseIso::new`]. Polynomials of
/// degree above one are not piecewise linear and are rejected.
#[derive(Clone, Debug)]
pub enum EdgeReparam {
    Identity,
    Pl(PlHomeo),
    /// Coefficients in increasing degree.
    Polynomial(Vec<Rational>),
}

/// A piecewise-linear isomorphism between two base graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseIso {
    source: BaseGraph,
    target: BaseGraph,
    vertex_map: Vec<usize>,
    /// Per source edge: target edge, whether orientation flips, and the
    /// reparameterization of `[0,1]` applied before any flip.
    edge_maps: Vec<(usize, bool, PlHomeo)>,
}

impl BaseIso {
    pub fn identity(graph: &BaseGraph) -> Self {
        let reparams = alloc::vec![EdgeReparam::Identity; graph.edges.len()];
        BaseIso::new(graph, graph, (0..graph.vertices).collect(), reparams)
            .expect("identity is an isomorphism")
    }

    pub fn new(
        source: &BaseGraph,
        target: &BaseGraph,
        vertex_map: Vec<usize>,
        reparams: Vec<EdgeReparam>,
    ) -> Result<Self, BaseError> {
        if vertex_map.len() != source.vertices
            || source.vertices != target.vertices
            || source.edges.len() != target.edges.len()
            || reparams.len() != source.edges.len()
        {
            return Err(BaseError::NotIsomorphism);
        }
        let mut seen = alloc::vec![false; target.vertices];
        for &v in &vertex_map {
            if v >= target.vertices || seen[v] {
                return Err(BaseError::NotIsomorphism);
            }
            seen[v] = true;
        }
        let mut edge_maps = Vec::with_capacity(source.edges.len());
        for (&(a, b), reparam) in source.edges.iter().zip(reparams) {
            let (ia, ib) = (vertex_map[a], vertex_map[b]);
            let te = target.edge_index(ia, ib).ok_or(BaseError::NotIsomorphism)?;
            let flipped = ia > ib;
            let pl = match reparam {
                EdgeReparam::Identity => {
                    PlHomeo::identity_on(Rational::zero(), Rational::one()).expect("unit interval")
                }
                EdgeReparam::Pl(pl) => pl,
                EdgeReparam::Polynomial(coeffs) => {
                    if coeffs.iter().skip(2).any(|c| !c.is_zero()) {
                        return Err(BaseError::NonPL);
                    }
                    let c0 = coeffs.first().cloned().unwrap_or_default();
                    let c1 = coeffs.get(1).cloned().unwrap_or_default();
                    PlHomeo::linear(Rational::zero(), c0.clone(), Rational::one(), c0 + c1)
                        .map_err(|_| BaseError::BadReparam)?
                }
            };
            let k = pl.knots();
            let ends_ok = !pl.has_open_start()
                && !pl.has_tail()
                && k[0] == (Rational::zero(), Rational::zero())
                && k[k.len() - 1] == (Rational::one(), Rational::one());
            if !ends_ok {
                return Err(BaseError::BadReparam);
            }
            edge_maps.push((te, flipped, pl));
        }
        Ok(BaseIso {
            source: source.clone(),
            target: target.clone(),
            vertex_map,
            edge_maps,
        })
    }

    pub fn source(&self) -> &BaseGraph {
        &self.source
    }

    pub fn target(&self) -> &BaseGraph {
        &self.target
    }

    pub fn apply(&self, p: &BasePoint) -> Result<BasePoint, BaseError> {
        if !self.source.contains(p) {
            return Err(BaseError::WrongGraph);
        }
        Ok(match p {
            BasePoint::Vertex(v) => BasePoint::Vertex(self.vertex_map[*v]),
            BasePoint::Edge { edge, t } => {
                let (te, flipped, pl) = &self.edge_maps[*edge];
                let s = pl.eval_rational(t).expect("t in (0,1)");
                let s = if *flipped { Rational::one() - s } else { s };
                BasePoint::Edge { edge: *te, t: s }
            }
        })
    }

    pub fn inverse(&self) -> BaseIso {
        let mut vertex_map = alloc::vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut edge_maps: Vec<Option<(usize, bool, PlHomeo)>> = alloc::vec![None; self.edge_maps.len()];
        for (e, (te, flipped, pl)) in self.edge_maps.iter().enumerate() {
            // forward: s = flip(pl(t)); backward: t = pl⁻¹(flip(s)).
            let inv = if *flipped {
                flip_pre(&pl.inverse())
            } else {
                pl.inverse()
            };
            edge_maps[*te] = Some((e, *flipped, inv));
        }
        BaseIso {
            source: self.target.clone(),
            target: self.source.clone(),
            vertex_map,
            edge_maps: edge_maps.into_iter().map(|m| m.expect("bijection")).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &BaseIso) -> Result<BaseIso, BaseError> {
        if first.target != self.source {
            return Err(BaseError::WrongGraph);
        }
        let vertex_map = first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        let mut edge_maps = Vec::with_capacity(first.edge_maps.len());
        for (mid_e, f1, pl1) in &first.edge_maps {
            let (te, f2, pl2) = &self.edge_maps[*mid_e];
            // t ↦ flip_{f2}(pl2(flip_{f1}(pl1(t)))) rewritten as flip_{f1^f2}(pl(t)).
            let inner = if *f1 { flip_pre(pl2) } else { pl2.clone() };
            let composed = inner.compose(pl1).expect("unit intervals");
            let composed = if *f1 { flip_post(&composed) } else { composed };
            edge_maps.push((*te, f1 ^ f2, composed));
        }
        Ok(BaseIso {
            source: first.source.clone(),
            target: self.target.clone(),
            vertex_map,
            edge_maps,
        })
    }
}

/// `t ↦ g(1 - t)` followed by `s ↦ 1 - s`: conjugation of `g` by the flip.
fn flip_pre(g: &PlHomeo) -> PlHomeo {
    let mut knots: Vec<(Rational, Rational)> = g
        .knots()
        .iter()
        .map(|(x, y)| (Rational::one() - x, Rational::one() - y))
        .collect();
    knots.reverse();
    PlHomeo::new(knots, false, false).expect("flip keeps monotone order")
}

fn flip_post(g: &PlHomeo) -> PlHomeo {
    flip_pre(g)
}

/// A continuous function on a base that is linear along each edge between
/// knots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFunction {
    vertex_values: Vec<Rational>,
    /// Interior knots per edge: parameters strictly increasing in `(0,1)`.
    edge_knots: Vec<Vec<(Rational, Rational)>>,
}

impl BaseFunction {
    pub fn constant(graph: &BaseGraph, c: Rational) -> Self {
        BaseFunction {
            vertex_values: alloc::vec![c; graph.vertices],
            edge_knots: alloc::vec![Vec::new(); graph.edges.len()],
        }
    }

    pub fn new(
        graph: &BaseGraph,
        vertex_values: Vec<Rational>,
        edge_knots: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self, BaseError> {
        if vertex_values.len() != graph.vertices || edge_knots.len() != graph.edges.len() {
            return Err(BaseError::WrongGraph);
        }
        for knots in &edge_knots {
            let mut last = Rational::zero();
            for (t, _) in knots {
                if *t <= last || *t >= Rational::one() {
                    return Err(BaseError::BadReparam);
                }
                last = t.clone();
            }
        }
        Ok(BaseFunction {
            vertex_values,
            edge_knots,
        })
    }

    pub fn from_vertices(graph: &BaseGraph, vertex_values: Vec<Rational>) -> Result<Self, BaseError> {
        BaseFunction::new(graph, vertex_values, alloc::vec![Vec::new(); graph.edges.len()])
    }

    pub fn vertex_values(&self) -> &[Rational] {
        &self.vertex_values
    }

    pub fn edge_knots(&self) -> &[Vec<(Rational, Rational)>] {
        &self.edge_knots
    }

    fn edge_profile(&self, graph: &BaseGraph, e: usize) -> Vec<(Rational, Rational)> {
        let (a, b) = graph.edges[e];
        let mut pts = alloc::vec![(Rational::zero(), self.vertex_values[a].clone())];
        pts.extend(self.edge_knots[e].iter().cloned());
        pts.push((Rational::one(), self.vertex_values[b].clone()));
        pts
    }

    pub fn eval(&self, graph: &BaseGraph, p: &BasePoint) -> Rational {
        match p {
            BasePoint::Vertex(v) => self.vertex_values[*v].clone(),
            BasePoint::Edge { edge, t } => {
                let pts = self.edge_profile(graph, *edge);
                let i = pts.partition_point(|(x, _)| x <= t) - 1;
                let (x0, y0) = &pts[i];
                let (x1, y1) = &pts[i + 1];
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// Points where the function may bend: vertices and interior knots.
    pub fn breakpoints(&self, graph: &BaseGraph) -> Vec<BasePoint> {
        let mut out: Vec<BasePoint> = (0..graph.vertices).map(BasePoint::Vertex).collect();
        for (e, knots) in self.edge_knots.iter().enumerate() {
            out.extend(knots.iter().map(|(t, _)| BasePoint::Edge {
                edge: e,
                t: t.clone(),
            }));
        }
        out
    }

    pub fn max_abs(&self) -> Rational {
        self.vertex_values
            .iter()
            .chain(self.edge_knots.iter().flatten().map(|(_, v)| v))
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn add(&self, other: &BaseFunction, graph: &BaseGraph) -> BaseFunction {
        let vertex_values = self
            .vertex_values
            .iter()
            .zip(&other.vertex_values)
            .map(|(a, b)| a + b)
            .collect();
        let edge_knots = (0..graph.edges.len())
            .map(|e| {
                let mut ts: Vec<Rational> = self.edge_knots[e]
                    .iter()
                    .chain(&other.edge_knots[e])
                    .map(|(t, _)| t.clone())
                    .collect();
                ts.sort();
                ts.dedup();
                ts.into_iter()
                    .map(|t| {
                        let p = BasePoint::Edge {
                            edge: e,
                            t: t.clone(),
                        };
                        let v = self.eval(graph, &p) + other.eval(graph, &p);
                        (t, v)
                    })
                    .collect()
            })
            .collect();
        BaseFunction {
            vertex_values,
            edge_knots,
        }
    }
}

/// Parameters on target edge `e` where `f ∘ ι⁻¹` may bend, for a function on
/// the source of `ι`.
pub(crate) fn transported_breakpoints(iso: &BaseIso, f: &BaseFunction) -> Vec<BasePoint> {
    let mut out: Vec<BasePoint> = Vec::new();
    for p in f.breakpoints(&iso.source) {
        out.push(iso.apply(&p).expect("source point"));
    }
    for (e, (_, _, pl)) in iso.edge_maps.iter().enumerate() {
        for (t, _) in pl.knots() {
            let p = iso.source.point_on_edge(e, t.clone());
            out.push(iso.apply(&p).expect("source point"));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn graph_validation() {
        assert_eq!(BaseGraph::new(0, &[]), Err(BaseError::NoVertices));
        assert_eq!(BaseGraph::new(2, &[(1, 1)]), Err(BaseError::SelfLoop(1, 1)));
        assert_eq!(
            BaseGraph::new(2, &[(0, 1), (1, 0)]),
            Err(BaseError::DuplicateEdge(1, 0))
        );
        assert!(BaseGraph::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn cycle_recognizer_and_components() {
        let c4 = BaseGraph::cycle(4).unwrap();
        assert_eq!(c4.cycle_order(), Some(alloc::vec![0, 1, 2, 3]));
        let path = BaseGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.cycle_order(), None);
        let two = BaseGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.components(), alloc::vec![0, 0, 1, 1]);
    }

    #[test]
    fn cardinality_classes() {
        assert_eq!(BaseGraph::discrete(1).unwrap().cardinality(), Cardinality::One);
        assert_eq!(BaseGraph::discrete(2).unwrap().cardinality(), Cardinality::Two);
        assert_eq!(
            BaseGraph::discrete(3).unwrap().cardinality(),
            Cardinality::AtLeastThree
        );
        let arc = BaseGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(arc.cardinality(), Cardinality::AtLeastThree);
    }

    #[test]
    fn sample_counts() {
        assert_eq!(BaseGraph::discrete(3).unwrap().sample_points(5).len(), 3);
        let c4 = BaseGraph::cycle(4).unwrap();
        assert_eq!(c4.sample_points(1).len(), 8);
        let pts = c4.sample_points(3);
        assert_eq!(pts.len(), 16);
        let params: Vec<_> = pts
            .iter()
            .filter_map(|p| match p {
                BasePoint::Edge { edge: 0, t } => Some(t.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(params, alloc::vec![q(1, 4), q(1, 2), q(3, 4)]);
    }

    fn quarter_turn(c4: &BaseGraph) -> BaseIso {
        BaseIso::new(
            c4,
            c4,
            alloc::vec![1, 2, 3, 0],
            alloc::vec![EdgeReparam::Identity; 4],
        )
        .unwrap()
    }

    #[test]
    fn quarter_rotation_has_order_four() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let rot = quarter_turn(&c4);
        let id = BaseIso::identity(&c4);
        let mut acc = id.clone();
        for _ in 0..4 {
            acc = rot.compose(&acc).unwrap();
        }
        for p in c4.sample_points(3) {
            assert_eq!(acc.apply(&p).unwrap(), p);
            assert_eq!(id.apply(&p).unwrap(), p);
            assert_eq!(rot.inverse().apply(&rot.apply(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn nonlinear_reparam_rejected() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let square = EdgeReparam::Polynomial(alloc::vec![q(0, 1), q(0, 1), q(1, 1)]);
        let mut reparams = alloc::vec![EdgeReparam::Identity; 4];
        reparams[0] = square;
        assert_eq!(
            BaseIso::new(&c4, &c4, alloc::vec![0, 1, 2, 3], reparams),
            Err(BaseError::NonPL)
        );
    }

    #[test]
    fn wrong_graph_point() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let id = BaseIso::identity(&c4);
        assert_eq!(id.apply(&BasePoint::Vertex(9)), Err(BaseError::WrongGraph));
    }

    #[test]
    fn distances_on_cycle() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let a = BasePoint::Vertex(0);
        let mid = BasePoint::edge(1, q(1, 2));
        assert_eq!(c4.distance(&a, &mid), Some(q(3, 2)));
        assert_eq!(c4.distance(&mid, &mid), Some(q(0, 1)));
        let d3 = BaseGraph::discrete(3).unwrap();
        assert_eq!(d3.distance(&BasePoint::Vertex(0), &BasePoint::Vertex(1)), None);
        let walk = c4.walk(&a, &mid).unwrap();
        assert_eq!(walk.first(), Some(&a));
        assert_eq!(walk.last(), Some(&mid));
    }

    #[test]
    fn base_function_eval() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let f = BaseFunction::new(
            &c4,
            alloc::vec![q(0, 1), q(1, 2), q(0, 1), q(-1, 2)],
            alloc::vec![
                alloc::vec![(q(1, 2), q(1, 1))],
                Vec::new(),
                Vec::new(),
                Vec::new()
            ],
        )
        .unwrap();
        assert_eq!(f.eval(&c4, &BasePoint::edge(0, q(1, 4))), q(1, 2));
        assert_eq!(f.eval(&c4, &BasePoint::edge(0, q(3, 4))), q(3, 4));
        assert_eq!(f.max_abs(), q(1, 1));
    }
}
