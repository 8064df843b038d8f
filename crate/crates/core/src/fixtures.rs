//! Named chart pairs and seeded generators of interlaced pairs.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ambient::{AmbientPoint, AmbientSpace, CycleShape};
use crate::base::{BaseFunction, BaseGraph, BaseIso, BasePoint};
use crate::chart::{ConeChart, Pole};
use crate::geom::Vec2;
use crate::num::{q, qi, Rational};
use crate::pairs::{make_offset_chart, recenter_chart};
use crate::pl::PlHomeo;

/// Two charts on one ambient space.
#[derive(Clone, Debug)]
pub struct ChartPair {
    pub name: String,
    pub ambient: AmbientSpace,
    pub phi: ConeChart,
    pub psi: ConeChart,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The cone over three points with `φ = ψ` the identity chart.
pub fn f0() -> ChartPair {
    let ambient = AmbientSpace::AbstractCone {
        base: BaseGraph::discrete(3).expect("three points"),
    };
    let phi = ConeChart::identity(&ambient).expect("identity chart");
    ChartPair {
        name: "F0".into(),
        ambient,
        psi: phi.clone(),
        phi,
    }
}

/// The cone over three points, `ψ` offset from the identity by
/// `1/2, -1/2, 0`.
pub fn f1() -> ChartPair {
    let ambient = AmbientSpace::AbstractCone {
        base: BaseGraph::discrete(3).expect("three points"),
    };
    let phi = ConeChart::identity(&ambient).expect("identity chart");
    let d =
        BaseFunction::from_vertices(phi.base(), alloc::vec![q(1, 2), q(-1, 2), qi(0)]).expect("three values");
    let psi = make_offset_chart(&phi, &d).expect("offset below 1");
    ChartPair {
        name: "F1".into(),
        ambient,
        phi,
        psi,
    }
}

/// Profile `L(t) = (1+t)/2` on `(0,1]`, `L(t) = t` beyond: half-width
/// `2/t` at every level `t >= 1` for scale 2.
pub fn f2_profile() -> PlHomeo {
    PlHomeo::new(
        alloc::vec![(qi(0), q(1, 2)), (qi(1), qi(1)), (qi(2), qi(2))],
        true,
        true,
    )
    .expect("increasing profile")
}

/// Square charts in the open square of half-width 8, centered at the
/// origin and at `(1/8, 0)`.
pub fn f2() -> ChartPair {
    let ambient = AmbientSpace::open_square(qi(8)).expect("positive width");
    let chart = |c: Vec2| {
        ConeChart::planar(&ambient, CycleShape::square(), c, qi(2), f2_profile(), None)
            .expect("inside the square")
    };
    ChartPair {
        name: "F2".into(),
        phi: chart(Vec2::zero()),
        psi: chart(Vec2::new(q(1, 8), qi(0))),
        ambient,
    }
}

/// Cones over one and two points, where removing the vertex disconnects.
pub fn degenerate_cones() -> Vec<AmbientSpace> {
    [1, 2]
        .into_iter()
        .map(|n| AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(n).expect("points"),
        })
        .collect()
}

/// The suspension over the square cycle.
pub fn suspension_c4() -> AmbientSpace {
    AmbientSpace::suspension(CycleShape::square())
}

fn small(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    q(rng.gen_range(-num..=num), den)
}

/// A graph with 1 to 6 vertices and up to 8 edges.
pub fn random_base(rng: &mut impl Rng) -> BaseGraph {
    let n = rng.gen_range(1..=6usize);
    let mut all: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            all.push((a, b));
        }
    }
    let mut edges = Vec::new();
    let want = rng.gen_range(0..=all.len().min(8));
    while edges.len() < want {
        let e = all.swap_remove(rng.gen_range(0..all.len()));
        edges.push(e);
    }
    BaseGraph::new(n, &edges).expect("simple graph")
}

/// A PL function with values in multiples of `1/8` of size at most `bound/8`
/// and at most one interior knot per edge.
pub fn random_function(rng: &mut impl Rng, base: &BaseGraph, bound: i64) -> BaseFunction {
    let values = (0..base.vertex_count()).map(|_| small(rng, bound, 8)).collect();
    let knots = base
        .edges()
        .iter()
        .map(|_| {
            if rng.gen_bool(0.5) {
                alloc::vec![(q(rng.gen_range(1..=3), 4), small(rng, bound, 8))]
            } else {
                Vec::new()
            }
        })
        .collect();
    BaseFunction::new(base, values, knots).expect("knots inside edges")
}

/// `φ` a radial chart with offset `|d₀| <= 1`, `ψ` offset from `φ` by
/// `|d| <= 1/2`.
pub fn random_offset_pair(rng: &mut impl Rng, index: usize) -> ChartPair {
    let base = random_base(rng);
    let ambient = AmbientSpace::AbstractCone { base: base.clone() };
    let d0 = random_function(rng, &base, 8);
    let phi = ConeChart::radial(&ambient, BaseIso::identity(&base), d0, Pole::Apex).expect("radial chart");
    let d = random_function(rng, &base, 4);
    let psi = make_offset_chart(&phi, &d).expect("offset below 1");
    ChartPair {
        name: alloc::format!("offset-{index}"),
        ambient,
        phi,
        psi,
    }
}

/// Square charts with distinct vertices: `φ` about a point within 1 of the
/// origin, `ψ` the recentered chart at a nearby point of `φ(Y × (5, ∞])`.
pub fn random_planar_pair(rng: &mut impl Rng, index: usize) -> ChartPair {
    let ambient = AmbientSpace::open_square(qi(8)).expect("positive width");
    loop {
        let c = Vec2::new(small(rng, 8, 8), small(rng, 8, 8));
        let scale = q(rng.gen_range(2..=4), 2);
        let phi = ConeChart::planar(
            &ambient,
            CycleShape::square(),
            c.clone(),
            scale.clone(),
            f2_profile(),
            None,
        )
        .expect("inside the square");
        // Half-width at level 5 is scale/5; stay within scale/6.
        let reach = (scale * qi(64) / qi(6)).floor().to_integer();
        let reach: i64 = i64::try_from(reach).expect("small");
        let v = Vec2::new(
            q(rng.gen_range(-reach..=reach), 64),
            q(rng.gen_range(-reach..=reach), 64),
        );
        if v.is_zero() {
            continue;
        }
        let target = AmbientPoint::Plane(&c + &v);
        if let Ok(psi) = recenter_chart(&phi, &target) {
            return ChartPair {
                name: alloc::format!("planar-{index}"),
                ambient,
                phi,
                psi,
            };
        }
    }
}

/// A random point of the ambient space with small denominators.
pub fn random_point(rng: &mut impl Rng, ambient: &AmbientSpace) -> AmbientPoint {
    match ambient {
        AmbientSpace::AbstractCone { base } => {
            if rng.gen_ratio(1, 40) {
                return AmbientPoint::Apex;
            }
            AmbientPoint::Ray {
                base: random_base_point(rng, base),
                level: q(rng.gen_range(-32..=128), 8),
            }
        }
        AmbientSpace::OpenSquare { half } => {
            let n = (half * qi(64)).ceil().to_integer();
            let n = i64::try_from(n).expect("small square") - 1;
            AmbientPoint::plane(q(rng.gen_range(-n..=n), 64), q(rng.gen_range(-n..=n), 64))
        }
        AmbientSpace::Suspension { cycle } => match rng.gen_range(0..40) {
            0 => AmbientPoint::North,
            1 => AmbientPoint::South,
            _ => AmbientPoint::Band {
                base: random_base_point(rng, cycle.base()),
                level: q(rng.gen_range(-48..=48), 8),
            },
        },
    }
}

pub fn random_base_point(rng: &mut impl Rng, base: &BaseGraph) -> BasePoint {
    let e = base.edges().len();
    if e > 0 && rng.gen_bool(0.5) {
        BasePoint::edge(rng.gen_range(0..e), q(rng.gen_range(1..=7), 8))
    } else {
        BasePoint::Vertex(rng.gen_range(0..base.vertex_count()))
    }
}

/// `n` distinct points of the open square of half-width 8 with coordinates
/// of denominator 64 inside `[-4, 4]`.
pub fn random_square_points(rng: &mut impl Rng, n: usize) -> Vec<AmbientPoint> {
    let mut out: Vec<AmbientPoint> = Vec::new();
    while out.len() < n {
        let p = AmbientPoint::plane(q(rng.gen_range(-256..=256), 64), q(rng.gen_range(-256..=256), 64));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}
