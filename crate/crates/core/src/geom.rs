//! Exact planar geometry: rational vectors and convex polygons around the
//! origin.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::num::{qi, Pq, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Rational,
    pub y: Rational,
}

impl Vec2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(Rational::zero(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, o: &Vec2) -> Rational {
        mul(&self.x, &o.x) + mul(&self.y, &o.y)
    }

    pub fn cross(&self, o: &Vec2) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn scale(&self, k: &Rational) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    /// Max-norm.
    pub fn cheb(&self) -> Rational {
        let (ax, ay) = (self.x.abs(), self.y.abs());
        if ax > ay {
            ax
        } else {
            ay
        }
    }

    /// `self + s (to - self)`.
    pub fn lerp(&self, to: &Vec2, s: &Rational) -> Vec2 {
        self + &(to - self).scale(s)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", Pq(&self.x), Pq(&self.y))
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Mul<&Rational> for &Vec2 {
    type Output = Vec2;
    fn mul(self, k: &Rational) -> Vec2 {
        self.scale(k)
    }
}

/// Product skipping the arithmetic for factors `0` and `±1`, which polygon
/// normals use heavily.
fn mul(a: &Rational, b: &Rational) -> Rational {
    let unit = |r: &Rational| r.is_integer() && r.numer().magnitude().is_one();
    if a.is_zero() || b.is_zero() {
        Rational::zero()
    } else if unit(b) {
        if b.is_negative() {
            -a
        } else {
            a.clone()
        }
    } else if unit(a) {
        if a.is_negative() {
            -b
        } else {
            b.clone()
        }
    } else {
        a * b
    }
}

fn div(a: &Rational, b: &Rational) -> Rational {
    if b.is_one() {
        a.clone()
    } else {
        a / b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("a polygon needs at least three vertices")]
    TooFewVertices,
    #[error("polygon vertices must be strictly convex and counter-clockwise")]
    NotConvex,
    #[error("the origin must lie strictly inside the polygon")]
    OriginNotInside,
}

/// A strictly convex counter-clockwise polygon with the origin strictly
/// inside. Serves as the unit level set of a planar chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    /// Outward normal and support value of edge `i` (from vertex `i` to `i+1`).
    normals: Vec<(Vec2, Rational)>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices);
        }
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            if !(b - a).cross(&(c - b)).is_positive() {
                return Err(PolygonError::NotConvex);
            }
        }
        let mut normals = Vec::with_capacity(n);
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let d = b - a;
            let normal = Vec2::new(d.y.clone(), -d.x.clone());
            let h = normal.dot(a);
            if !h.is_positive() {
                return Err(PolygonError::OriginNotInside);
            }
            normals.push((normal, h));
        }
        // Every step turns counter-clockwise about the origin; require exactly
        // one upward crossing of the positive x-axis so the boundary winds once.
        let mut winding = 0;
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            if a.y.is_negative() && !b.y.is_negative() {
                let x = &a.x + (&b.x - &a.x) * (-&a.y) / (&b.y - &a.y);
                if x.is_positive() {
                    winding += 1;
                }
            }
        }
        if winding != 1 {
            return Err(PolygonError::NotConvex);
        }
        Ok(ConvexPolygon { vertices, normals })
    }

    /// The square with corners `(±1, ±1)`, starting at `(1, 1)`.
    pub fn square() -> Self {
        let v = |x: i64, y: i64| Vec2::new(qi(x), qi(y));
        ConvexPolygon::new(alloc::vec![v(1, 1), v(-1, 1), v(-1, -1), v(1, -1)]).expect("unit square")
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn normals(&self) -> &[(Vec2, Rational)] {
        &self.normals
    }

    /// Minkowski gauge: the least `s >= 0` with `d ∈ s·P`.
    pub fn gauge(&self, d: &Vec2) -> Rational {
        self.normals
            .iter()
            .map(|(n, h)| div(&n.dot(d), h))
            .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// Point on edge `i` at parameter `u ∈ [0,1]`.
    pub fn boundary_point(&self, i: usize, u: &Rational) -> Vec2 {
        let n = self.vertices.len();
        self.vertices[i].lerp(&self.vertices[(i + 1) % n], u)
    }

    /// For nonzero `d`, the edge and parameter of `d / gauge(d)`, with the
    /// parameter in `[0, 1)`.
    pub fn locate(&self, d: &Vec2) -> (usize, Rational) {
        let vals: Vec<Rational> = self.normals.iter().map(|(n, h)| div(&n.dot(d), h)).collect();
        let g = vals.iter().max().expect("nonempty polygon").clone();
        let n = self.vertices.len();
        // At a corner two faces attain the gauge; the edge starting there has
        // parameter 0, the one ending there parameter 1.
        for (i, v) in vals.iter().enumerate() {
            if *v != g {
                continue;
            }
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let e = b - a;
            let u = if e.x.abs() >= e.y.abs() {
                (div(&d.x, &g) - &a.x) / &e.x
            } else {
                (div(&d.y, &g) - &a.y) / &e.y
            };
            if u < Rational::one() {
                return (i, u);
            }
        }
        unreachable!("a boundary point lies on some edge")
    }

    /// Parameter interval `[lo, hi] ⊂ [0,1]` of the segment `p + s(q - p)`
    /// lying in the closed polygon `c + w·P`, if nonempty.
    pub fn clip_segment(&self, c: &Vec2, w: &Rational, p: &Vec2, q: &Vec2) -> Option<(Rational, Rational)> {
        let mut lo = Rational::zero();
        let mut hi = Rational::from_integer(1.into());
        let dir = q - p;
        let rel = p - c;
        for (normal, h) in &self.normals {
            // normal·(rel + s dir) <= w h
            let a = normal.dot(&dir);
            let b = w * h - normal.dot(&rel);
            if a.is_zero() {
                if b.is_negative() {
                    return None;
                }
            } else if a.is_positive() {
                let s = &b / &a;
                if s < hi {
                    hi = s;
                }
            } else {
                let s = &b / &a;
                if s > lo {
                    lo = s;
                }
            }
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }
}

/// Whether `x` lies on the closed segment `[p, q]`.
pub fn on_segment(p: &Vec2, q: &Vec2, x: &Vec2) -> bool {
    let d = q - p;
    let r = x - p;
    if !d.cross(&r).is_zero() {
        return false;
    }
    let t = d.dot(&r);
    !t.is_negative() && t <= d.dot(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    fn v(x: Rational, y: Rational) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn square_gauge_is_max_norm() {
        let sq = ConvexPolygon::square();
        assert_eq!(sq.gauge(&v(q(1, 2), q(-3, 4))), q(3, 4));
        assert_eq!(sq.gauge(&Vec2::zero()), q(0, 1));
    }

    #[test]
    fn locate_round_trips() {
        let sq = ConvexPolygon::square();
        let d = v(q(1, 3), q(2, 3));
        let (i, u) = sq.locate(&d);
        let g = sq.gauge(&d);
        assert_eq!(sq.boundary_point(i, &u).scale(&g), d);
        assert_eq!(sq.locate(&v(q(2, 1), q(2, 1))), (0, q(0, 1)));
    }

    #[test]
    fn rejects_bad_polygons() {
        let pts = alloc::vec![
            v(qi(1), qi(1)),
            v(qi(-1), qi(-1)),
            v(qi(-1), qi(1)),
            v(qi(1), qi(-1))
        ];
        assert!(ConvexPolygon::new(pts).is_err());
        let off = alloc::vec![v(qi(1), qi(1)), v(qi(2), qi(1)), v(qi(2), qi(2))];
        assert_eq!(ConvexPolygon::new(off), Err(PolygonError::OriginNotInside));
    }

    #[test]
    fn clipping() {
        let sq = ConvexPolygon::square();
        let c = Vec2::zero();
        let (lo, hi) = sq
            .clip_segment(&c, &qi(1), &v(qi(-2), qi(0)), &v(qi(2), qi(0)))
            .unwrap();
        assert_eq!((lo, hi), (q(1, 4), q(3, 4)));
        assert!(sq
            .clip_segment(&c, &qi(1), &v(qi(-2), qi(2)), &v(qi(2), qi(2)))
            .is_none());
        assert!(on_segment(&v(qi(0), qi(0)), &v(qi(2), qi(2)), &v(qi(1), qi(1))));
        assert!(!on_segment(&v(qi(0), qi(0)), &v(qi(2), qi(2)), &v(qi(3), qi(3))));
    }
}
