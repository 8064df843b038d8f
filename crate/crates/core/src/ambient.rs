//! Ambient model spaces and their points.
//!
//! * [`AmbientSpace::AbstractCone`]: `Y × ℚ ∪ {apex}`, the level coordinate
//!   is signed so that charts with negative offsets still land in the space.
//! * [`AmbientSpace::OpenSquare`]: rational points strictly inside a square.
//! * [`AmbientSpace::Suspension`]: `Y × ℚ ∪ {north, south}` over a cycle
//!   base, with two planar views that send one pole to the origin and the
//!   other to infinity.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::base::{BaseGraph, BasePoint};
use crate::geom::{ConvexPolygon, Vec2};
use crate::num::{qi, Pq, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AmbientError {
    #[error("base graph is not a single cycle")]
    NotACycle,
    #[error("polygon has {polygon} vertices but the cycle has {cycle}")]
    ShapeMismatch { polygon: usize, cycle: usize },
    #[error("square half-width must be positive")]
    NonPositiveWidth,
}

/// A cycle base identified with the boundary of a convex polygon: the
/// `i`-th vertex in cycle order goes to the `i`-th polygon corner and edges
/// go linearly onto polygon sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleShape {
    base: BaseGraph,
    shape: ConvexPolygon,
    order: Vec<usize>,
    position: Vec<usize>,
}

impl CycleShape {
    pub fn new(base: BaseGraph, shape: ConvexPolygon) -> Result<Self, AmbientError> {
        let order = base.cycle_order().ok_or(AmbientError::NotACycle)?;
        if order.len() != shape.len() {
            return Err(AmbientError::ShapeMismatch {
                polygon: shape.len(),
                cycle: order.len(),
            });
        }
        let mut position = alloc::vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Ok(CycleShape {
            base,
            shape,
            order,
            position,
        })
    }

    /// `C_4` on the square with corners `(±1, ±1)`.
    pub fn square() -> Self {
        CycleShape::new(BaseGraph::cycle(4).expect("C4"), ConvexPolygon::square()).expect("square matches C4")
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn shape(&self) -> &ConvexPolygon {
        &self.shape
    }

    /// The boundary point of the shape corresponding to a base point.
    pub fn direction(&self, y: &BasePoint) -> Vec2 {
        let corners = self.shape.vertices();
        match y {
            BasePoint::Vertex(v) => corners[self.position[*v]].clone(),
            BasePoint::Edge { edge, t } => {
                let (a, b) = self.base.edges()[*edge];
                corners[self.position[a]].lerp(&corners[self.position[b]], t)
            }
        }
    }

    /// The base point whose direction is a positive multiple of `d ≠ 0`.
    pub fn base_point(&self, d: &Vec2) -> BasePoint {
        let (i, u) = self.shape.locate(d);
        let n = self.order.len();
        let a = self.order[i];
        let b = self.order[(i + 1) % n];
        if u == Rational::from_integer(0.into()) {
            return BasePoint::Vertex(a);
        }
        let e = self
            .base
            .edge_index(a, b)
            .expect("cycle neighbours share an edge");
        let t = if a < b { u } else { Rational::one() - u };
        BasePoint::Edge { edge: e, t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbientSpace {
    AbstractCone { base: BaseGraph },
    OpenSquare { half: Rational },
    Suspension { cycle: CycleShape },
}

/// Planar views of a suspension: `North` sends the north pole to the origin
/// and the south pole to infinity; `South` the other way round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum View {
    North,
    South,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AmbientPoint {
    Apex,
    Ray { base: BasePoint, level: Rational },
    Plane(Vec2),
    North,
    South,
    Band { base: BasePoint, level: Rational },
}

impl fmt::Display for AmbientPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientPoint::Apex => f.write_str("apex"),
            AmbientPoint::Ray { base, level } => write!(f, "[{base}, {}]", Pq(level)),
            AmbientPoint::Plane(v) => write!(f, "{v}"),
            AmbientPoint::North => f.write_str("north"),
            AmbientPoint::South => f.write_str("south"),
            AmbientPoint::Band { base, level } => write!(f, "[{base}, {}]", Pq(level)),
        }
    }
}

impl AmbientPoint {
    pub fn plane(x: Rational, y: Rational) -> Self {
        AmbientPoint::Plane(Vec2::new(x, y))
    }

    pub fn as_plane(&self) -> Option<&Vec2> {
        match self {
            AmbientPoint::Plane(v) => Some(v),
            _ => None,
        }
    }
}

/// Radius profile of the suspension views: `4 - 2s` for `s <= 1`, `2/s`
/// beyond. Strictly decreasing from `∞` to `0`.
fn view_radius(s: &Rational) -> Rational {
    if *s <= qi(1) {
        qi(4) - qi(2) * s
    } else {
        qi(2) / s
    }
}

fn view_level(radius: &Rational) -> Rational {
    if *radius >= qi(2) {
        (qi(4) - radius) / qi(2)
    } else {
        qi(2) / radius
    }
}

impl AmbientSpace {
    pub fn open_square(half: Rational) -> Result<Self, AmbientError> {
        if !half.is_positive() {
            return Err(AmbientError::NonPositiveWidth);
        }
        Ok(AmbientSpace::OpenSquare { half })
    }

    pub fn suspension(cycle: CycleShape) -> Self {
        AmbientSpace::Suspension { cycle }
    }

    pub fn base(&self) -> Option<&BaseGraph> {
        match self {
            AmbientSpace::AbstractCone { base } => Some(base),
            AmbientSpace::Suspension { cycle } => Some(cycle.base()),
            AmbientSpace::OpenSquare { .. } => None,
        }
    }

    pub fn contains(&self, x: &AmbientPoint) -> bool {
        match (self, x) {
            (AmbientSpace::AbstractCone { .. }, AmbientPoint::Apex) => true,
            (AmbientSpace::AbstractCone { base }, AmbientPoint::Ray { base: y, .. }) => base.contains(y),
            (AmbientSpace::OpenSquare { half }, AmbientPoint::Plane(v)) => v.cheb() < *half,
            (AmbientSpace::Suspension { .. }, AmbientPoint::North | AmbientPoint::South) => true,
            (AmbientSpace::Suspension { cycle }, AmbientPoint::Band { base: y, .. }) => {
                cycle.base().contains(y)
            }
            _ => false,
        }
    }

    /// Coordinates of `x` in a suspension view; `None` for the pole sent to
    /// infinity. Other ambient spaces are their own view.
    pub fn to_view(&self, view: Option<View>, x: &AmbientPoint) -> Option<Vec2> {
        match (self, view) {
            (AmbientSpace::Suspension { cycle }, Some(view)) => match (view, x) {
                (View::North, AmbientPoint::North) | (View::South, AmbientPoint::South) => Some(Vec2::zero()),
                (View::North, AmbientPoint::South) | (View::South, AmbientPoint::North) => None,
                (_, AmbientPoint::Band { base, level }) => {
                    let s = if view == View::North {
                        level.clone()
                    } else {
                        -level
                    };
                    Some(cycle.direction(base).scale(&view_radius(&s)))
                }
                _ => None,
            },
            (_, _) => x.as_plane().cloned(),
        }
    }

    /// Inverse of [`AmbientSpace::to_view`].
    pub fn from_view(&self, view: Option<View>, v: &Vec2) -> AmbientPoint {
        match (self, view) {
            (AmbientSpace::Suspension { cycle }, Some(view)) => {
                if v.is_zero() {
                    return match view {
                        View::North => AmbientPoint::North,
                        View::South => AmbientPoint::South,
                    };
                }
                let radius = cycle.shape().gauge(v);
                let s = view_level(&radius);
                let level = if view == View::North { s } else { -s };
                AmbientPoint::Band {
                    base: cycle.base_point(v),
                    level,
                }
            }
            _ => AmbientPoint::Plane(v.clone()),
        }
    }

    /// The view in which neither `a` nor `b` is at infinity, preferring the
    /// north view. `None` for the two poles of a suspension.
    pub fn common_view(&self, a: &AmbientPoint, b: &AmbientPoint) -> Option<Option<View>> {
        match self {
            AmbientSpace::Suspension { .. } => {
                let south = |x: &AmbientPoint| matches!(x, AmbientPoint::South);
                let north = |x: &AmbientPoint| matches!(x, AmbientPoint::North);
                if !south(a) && !south(b) {
                    Some(Some(View::North))
                } else if !north(a) && !north(b) {
                    Some(Some(View::South))
                } else {
                    None
                }
            }
            _ => Some(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn square_membership_is_strict() {
        let sq = AmbientSpace::open_square(qi(8)).unwrap();
        assert!(sq.contains(&AmbientPoint::plane(q(79, 10), qi(0))));
        assert!(!sq.contains(&AmbientPoint::plane(qi(8), qi(0))));
        assert!(AmbientSpace::open_square(qi(0)).is_err());
    }

    #[test]
    fn cycle_shape_round_trip() {
        let c = CycleShape::square();
        for y in c.base().sample_points(3) {
            let d = c.direction(&y);
            assert_eq!(c.base_point(&d.scale(&q(5, 3))), y);
        }
    }

    #[test]
    fn suspension_views_round_trip() {
        let s = AmbientSpace::suspension(CycleShape::square());
        let pts = [
            AmbientPoint::North,
            AmbientPoint::Band {
                base: BasePoint::edge(1, q(1, 3)),
                level: q(-7, 2),
            },
            AmbientPoint::Band {
                base: BasePoint::Vertex(2),
                level: q(5, 2),
            },
            AmbientPoint::Band {
                base: BasePoint::Vertex(0),
                level: qi(1),
            },
        ];
        for view in [View::North, View::South] {
            for x in &pts {
                if let Some(v) = s.to_view(Some(view), x) {
                    assert_eq!(&s.from_view(Some(view), &v), x);
                } else {
                    assert_eq!((view, x), (View::South, &AmbientPoint::North));
                }
            }
        }
        assert_eq!(s.to_view(Some(View::North), &AmbientPoint::South), None);
        assert_eq!(s.common_view(&AmbientPoint::North, &AmbientPoint::South), None);
    }
}
