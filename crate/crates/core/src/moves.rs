//! Moving points: slides and swaps inside one cone chart, rerouting paths
//! around finite sets, chains of charts along a path, and the induction
//! carrying `n` points to `n` points.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::ambient::{AmbientPoint, AmbientSpace, CycleShape, View};
use crate::base::{BasePoint, Cardinality};
use crate::chart::{ChartError, ChartPreimage, ConeChart};
use crate::geom::{on_segment, Vec2};
use crate::homeo::{Homeo, HomeoError, Slide};
use crate::num::{floor_int, q, qi, Rational};
use crate::pairs::{recenter_chart, PairError};
use crate::pl::PlHomeo;
use crate::swindle::{build_swindle, SwindleError};

/// Default bound on the number of points [`strong_n_extend`] accepts.
pub const STRONG_N_BOUND: usize = 4;

/// Upper bound on the number of charts in a chain built by [`cover_path`].
pub const CHAIN_BOUND: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("point is outside the chart image")]
    OutsideChart,
    #[error("the chart vertex cannot be slid")]
    VertexInput,
    #[error("target level must be positive")]
    InvalidTarget,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("no recentered chart found for the slid point")]
    NoRecentering,
    #[error("base has at most two points; removing a point disconnects the space")]
    BaseTooSmall,
    #[error("a path endpoint lies in the avoided set")]
    EndpointInF,
    #[error("path is not a valid polyline in the ambient space")]
    BadPath,
    #[error("chain is broken at chart {0}")]
    ChainBroken(usize),
    #[error("chart {0} meets the avoided set")]
    ChartMeetsF(usize),
    #[error("chain needs more than the allowed number of charts")]
    ChainTooLong,
    #[error("points are not pairwise distinct")]
    DuplicatePoint,
    #[error("sources and targets differ in number")]
    LengthMismatch,
    #[error("more points than the configured bound")]
    TooManyPoints,
    #[error("ambient space is not a supported model")]
    UnsupportedAmbient,
    #[error("point is outside the ambient space")]
    OutsideAmbient,
    #[error("constructed map fails its own check: {0}")]
    Unverified(&'static str),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Swindle(#[from] SwindleError),
    #[error(transparent)]
    Homeo(#[from] HomeoError),
}

/// Slides `x = φ(y₀, t₀)` to `φ(y₀, target)` along its ray. The map is
/// supported on the chart image and fixes every ray at base distance at
/// least `1/2` from `y₀`.
pub fn radial_slide(phi: &ConeChart, x: &AmbientPoint, target: &Rational) -> Result<Homeo, MoveError> {
    let (y, t) = match phi.invert(x) {
        ChartPreimage::Outside => return Err(MoveError::OutsideChart),
        ChartPreimage::Vertex => return Err(MoveError::VertexInput),
        ChartPreimage::Interior(y, t) => (y, t),
    };
    if !target.is_positive() {
        return Err(MoveError::InvalidTarget);
    }
    if *target == t {
        return Ok(Homeo::Identity);
    }
    Ok(Homeo::Slide(Slide::new(phi.clone(), y, t, target.clone())))
}

/// A map supported on the chart image sending `x` to the vertex: slide `x`
/// deep enough to recenter, then undo the vertex swap onto the slid point.
fn to_vertex(phi: &ConeChart, x: &AmbientPoint) -> Result<Homeo, MoveError> {
    let (y, t) = match phi.invert(x) {
        ChartPreimage::Outside => return Err(MoveError::OutsideChart),
        ChartPreimage::Vertex => return Ok(Homeo::Identity),
        ChartPreimage::Interior(y, t) => (y, t),
    };
    if phi.as_planar().is_none() {
        return Err(MoveError::Unsupported("only planar charts can be recentered"));
    }
    let mut target = if t > qi(4) { None } else { Some(qi(5)) };
    for _ in 0..12 {
        let (slide, x1) = match &target {
            None => (Homeo::Identity, x.clone()),
            Some(s) => (radial_slide(phi, x, s)?, phi.at(&y, s)),
        };
        match recenter_chart(phi, &x1) {
            Ok(psi) => {
                let f = build_swindle(phi, &psi)?;
                let swap = Homeo::Swap(Rc::new(f), true);
                return Ok(slide.then(swap.inverse()));
            }
            Err(PairError::TargetTooShallow) => {
                target = Some(match target {
                    None => qi(5),
                    Some(s) => s * qi(2),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(MoveError::NoRecentering)
}

/// A homeomorphism supported on the chart image carrying `x` to `y`.
///
/// Two points on one ray are joined by a slide. Otherwise both points are
/// sent to the vertex (planar charts only) and the second map is inverted.
pub fn move_in_cone(phi: &ConeChart, x: &AmbientPoint, y: &AmbientPoint) -> Result<Homeo, MoveError> {
    if x == y {
        if !phi.image_contains(x) {
            return Err(MoveError::OutsideChart);
        }
        return Ok(Homeo::Identity);
    }
    let px = phi.invert(x);
    let py = phi.invert(y);
    if matches!(px, ChartPreimage::Outside) || matches!(py, ChartPreimage::Outside) {
        return Err(MoveError::OutsideChart);
    }
    if let (ChartPreimage::Interior(a, _), ChartPreimage::Interior(b, t)) = (&px, &py) {
        if a == b {
            return radial_slide(phi, x, t);
        }
    }
    if phi.as_planar().is_none() {
        return Err(MoveError::Unsupported(
            "points share no ray and the chart cannot be recentered",
        ));
    }
    let hx = to_vertex(phi, x)?;
    let hy = to_vertex(phi, y)?;
    let h = hx.then(hy.inverse());
    Ok(Homeo::Declared(alloc::boxed::Box::new(h), vec![phi.clone()]))
}

/// A path through finitely many waypoints.
///
/// In the planar models the segments are straight in the coordinates of a
/// single view. In the abstract cone a segment either stays on one ray or
/// runs from a ray point straight up to the apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlPath {
    ambient: AmbientSpace,
    view: Option<View>,
    waypoints: Vec<AmbientPoint>,
}

impl PlPath {
    pub fn new(
        ambient: &AmbientSpace,
        view: Option<View>,
        points: Vec<AmbientPoint>,
    ) -> Result<Self, MoveError> {
        let mut waypoints: Vec<AmbientPoint> = Vec::with_capacity(points.len());
        for p in points {
            if !ambient.contains(&p) {
                return Err(MoveError::OutsideAmbient);
            }
            if waypoints.last() != Some(&p) {
                waypoints.push(p);
            }
        }
        if waypoints.is_empty() {
            return Err(MoveError::BadPath);
        }
        match ambient {
            AmbientSpace::AbstractCone { .. } => {
                if view.is_some() {
                    return Err(MoveError::BadPath);
                }
                for w in waypoints.windows(2) {
                    let ok = match (&w[0], &w[1]) {
                        (AmbientPoint::Apex, _) | (_, AmbientPoint::Apex) => true,
                        (AmbientPoint::Ray { base: a, .. }, AmbientPoint::Ray { base: b, .. }) => a == b,
                        _ => false,
                    };
                    if !ok {
                        return Err(MoveError::BadPath);
                    }
                }
            }
            AmbientSpace::OpenSquare { .. } => {
                if view.is_some() {
                    return Err(MoveError::BadPath);
                }
            }
            AmbientSpace::Suspension { .. } => {
                if view.is_none() || waypoints.iter().any(|p| ambient.to_view(view, p).is_none()) {
                    return Err(MoveError::BadPath);
                }
            }
        }
        Ok(PlPath {
            ambient: ambient.clone(),
            view,
            waypoints,
        })
    }

    /// The straight segment from `a` to `b` in their common view.
    pub fn segment(ambient: &AmbientSpace, a: &AmbientPoint, b: &AmbientPoint) -> Result<Self, MoveError> {
        let view = ambient.common_view(a, b).ok_or(MoveError::BadPath)?;
        PlPath::new(ambient, view, vec![a.clone(), b.clone()])
    }

    /// A planar polyline given in view coordinates.
    pub fn planar(ambient: &AmbientSpace, view: Option<View>, points: &[Vec2]) -> Result<Self, MoveError> {
        let pts = points.iter().map(|v| ambient.from_view(view, v)).collect();
        PlPath::new(ambient, view, pts)
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn view(&self) -> Option<View> {
        self.view
    }

    pub fn waypoints(&self) -> &[AmbientPoint] {
        &self.waypoints
    }

    pub fn start(&self) -> &AmbientPoint {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &AmbientPoint {
        self.waypoints.last().expect("nonempty path")
    }

    /// Waypoints in view coordinates; `None` in the abstract cone.
    pub fn view_points(&self) -> Option<Vec<Vec2>> {
        if matches!(self.ambient, AmbientSpace::AbstractCone { .. }) {
            return None;
        }
        self.waypoints
            .iter()
            .map(|p| self.ambient.to_view(self.view, p))
            .collect()
    }

    /// The point at parameter `s ∈ [0, 1]`, each segment taking an equal
    /// share of the parameter.
    pub fn eval(&self, s: &Rational) -> Option<AmbientPoint> {
        if s.is_negative() || *s > Rational::one() {
            return None;
        }
        let n = self.waypoints.len() - 1;
        if n == 0 {
            return Some(self.start().clone());
        }
        let u = s * qi(n as i64);
        let k = (floor_int(&u).max(0) as usize).min(n - 1);
        let frac = u - qi(k as i64);
        let (a, b) = (&self.waypoints[k], &self.waypoints[k + 1]);
        if let Some(pts) = self.view_points() {
            return Some(
                self.ambient
                    .from_view(self.view, &pts[k].lerp(&pts[k + 1], &frac)),
            );
        }
        Some(match (a, b) {
            (AmbientPoint::Ray { base, level: t1 }, AmbientPoint::Ray { level: t2, .. }) => {
                AmbientPoint::Ray {
                    base: base.clone(),
                    level: t1 + (t2 - t1) * &frac,
                }
            }
            (AmbientPoint::Ray { base, level }, AmbientPoint::Apex) => {
                if frac == Rational::one() {
                    AmbientPoint::Apex
                } else {
                    // Levels t/(1-u) run from t up to the apex.
                    AmbientPoint::Ray {
                        base: base.clone(),
                        level: level / (Rational::one() - &frac),
                    }
                }
            }
            (AmbientPoint::Apex, AmbientPoint::Ray { base, level }) => {
                if frac.is_zero() {
                    AmbientPoint::Apex
                } else {
                    AmbientPoint::Ray {
                        base: base.clone(),
                        level: level / &frac,
                    }
                }
            }
            _ => a.clone(),
        })
    }

    /// Whether the path passes through `x`.
    pub fn meets(&self, x: &AmbientPoint) -> bool {
        if self.waypoints.contains(x) {
            return true;
        }
        if let Some(pts) = self.view_points() {
            let v = match self.ambient.to_view(self.view, x) {
                Some(v) => v,
                None => return false,
            };
            return pts.windows(2).any(|w| on_segment(&w[0], &w[1], &v));
        }
        let (y, t) = match x {
            AmbientPoint::Ray { base, level } => (base, level),
            _ => return false,
        };
        self.waypoints.windows(2).any(|w| match (&w[0], &w[1]) {
            (AmbientPoint::Ray { base: a, level: t1 }, AmbientPoint::Ray { level: t2, .. }) => {
                a == y && t1.min(t2) <= t && t <= t1.max(t2)
            }
            (AmbientPoint::Ray { base: a, level }, AmbientPoint::Apex)
            | (AmbientPoint::Apex, AmbientPoint::Ray { base: a, level }) => a == y && level <= t,
            _ => false,
        })
    }
}

fn cycle_of(ambient: &AmbientSpace) -> Option<CycleShape> {
    match ambient {
        AmbientSpace::OpenSquare { .. } => Some(CycleShape::square()),
        AmbientSpace::Suspension { cycle } => Some(cycle.clone()),
        AmbientSpace::AbstractCone { .. } => None,
    }
}

/// The planar chart `c + (w₀ / (1 + t))·P` about `c`.
pub fn disc_chart(
    ambient: &AmbientSpace,
    view: Option<View>,
    center: Vec2,
    w0: Rational,
) -> Result<ConeChart, MoveError> {
    let cycle = cycle_of(ambient).ok_or(MoveError::UnsupportedAmbient)?;
    let profile = PlHomeo::new(vec![(qi(0), qi(1)), (qi(1), qi(2))], true, true).map_err(ChartError::Pl)?;
    Ok(ConeChart::planar(ambient, cycle, center, w0, profile, view)?)
}

/// Room around `c` in the gauge of the model's polygon: the distance to
/// the nearest avoided point and to the edge of the open square, capped
/// at 2.
pub fn clearance(ambient: &AmbientSpace, view: Option<View>, c: &Vec2, avoid: &[AmbientPoint]) -> Rational {
    let mut rho = qi(2);
    let shape = match cycle_of(ambient) {
        Some(cycle) => cycle.shape().clone(),
        None => return Rational::zero(),
    };
    if let AmbientSpace::OpenSquare { half } = ambient {
        let b = half - c.cheb();
        if b < rho {
            rho = b;
        }
    }
    for a in avoid {
        if let Some(v) = ambient.to_view(view, a) {
            let g = shape.gauge(&(&v - c));
            if g < rho {
                rho = g;
            }
        }
    }
    rho
}

/// Supplies, for a point `f` of the avoided set, a cone chart with vertex
/// `f` whose image misses the listed points.
pub trait ChartProvider {
    fn chart_around(
        &self,
        ambient: &AmbientSpace,
        view: Option<View>,
        f: &AmbientPoint,
        avoid: &[AmbientPoint],
    ) -> Result<ConeChart, MoveError>;
}

/// Provides [`disc_chart`]s of half the available [`clearance`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DiscProvider;

impl ChartProvider for DiscProvider {
    fn chart_around(
        &self,
        ambient: &AmbientSpace,
        view: Option<View>,
        f: &AmbientPoint,
        avoid: &[AmbientPoint],
    ) -> Result<ConeChart, MoveError> {
        let c = ambient.to_view(view, f).ok_or(MoveError::BadPath)?;
        let rho = clearance(ambient, view, &c, avoid);
        if !rho.is_positive() {
            return Err(MoveError::EndpointInF);
        }
        disc_chart(ambient, view, c, rho / qi(2))
    }
}

fn base_too_small(ambient: &AmbientSpace) -> bool {
    ambient
        .base()
        .is_some_and(|b| matches!(b.cardinality(), Cardinality::One | Cardinality::Two))
}

/// A path with the same endpoints avoiding every point of `f`.
///
/// For each `f` on the path, the part of the path inside the closed level-1
/// polygon of a chart about `f` is replaced by: the entry point, the level-2
/// point on the entry ray, the level-2 polygon counterclockwise to the exit
/// ray, and the exit point.
pub fn reroute_path(
    path: &PlPath,
    f: &[AmbientPoint],
    provider: &dyn ChartProvider,
) -> Result<PlPath, MoveError> {
    if f.contains(path.start()) || f.contains(path.end()) {
        return Err(MoveError::EndpointInF);
    }
    if base_too_small(path.ambient()) {
        return Err(MoveError::BaseTooSmall);
    }
    if !f.iter().any(|p| path.meets(p)) {
        return Ok(path.clone());
    }
    if matches!(path.ambient(), AmbientSpace::AbstractCone { .. }) {
        return Err(MoveError::Unsupported("rerouting in the abstract cone"));
    }
    let ambient = path.ambient().clone();
    let view = path.view();
    let mut current = path.clone();
    for (i, p) in f.iter().enumerate() {
        if !current.meets(p) {
            continue;
        }
        let mut avoid: Vec<AmbientPoint> = f
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x.clone())
            .collect();
        avoid.push(current.start().clone());
        avoid.push(current.end().clone());
        let chart = provider.chart_around(&ambient, view, p, &avoid)?;
        let pc = chart
            .as_planar()
            .filter(|pc| pc.view() == view && Some(pc.center().clone()) == ambient.to_view(view, p))
            .ok_or(MoveError::Unsupported(
                "provider chart must be planar about the point",
            ))?;
        if avoid.iter().any(|a| chart.image_contains(a)) {
            return Err(MoveError::ChartMeetsF(i));
        }
        let pts = current.view_points().expect("planar path");
        let detour = detour(
            pc.center(),
            pc.cycle().shape(),
            &pc.width(&crate::num::ExtendedLevel::int(1)),
            &pc.width(&crate::num::ExtendedLevel::int(2)),
            &pts,
        )
        .ok_or(MoveError::Unverified("path through a point misses its chart"))?;
        current = PlPath::planar(&ambient, view, &detour)?;
    }
    if f.iter().any(|p| current.meets(p)) {
        return Err(MoveError::Unverified("rerouted path still meets the avoided set"));
    }
    Ok(current)
}

fn detour(
    c: &Vec2,
    shape: &crate::geom::ConvexPolygon,
    w1: &Rational,
    w2: &Rational,
    pts: &[Vec2],
) -> Option<Vec<Vec2>> {
    let mut first: Option<(usize, Rational)> = None;
    let mut last: Option<(usize, Rational)> = None;
    for i in 0..pts.len() - 1 {
        if let Some((lo, hi)) = shape.clip_segment(c, w1, &pts[i], &pts[i + 1]) {
            if first.is_none() {
                first = Some((i, lo));
            }
            last = Some((i, hi));
        }
    }
    let (i0, s0) = first?;
    let (i1, s1) = last?;
    let e0 = pts[i0].lerp(&pts[i0 + 1], &s0);
    let e1 = pts[i1].lerp(&pts[i1 + 1], &s1);
    let ratio = w2 / w1;
    let d0 = &e0 - c;
    let d1 = &e1 - c;
    let a = c + &d0.scale(&ratio);
    let b = c + &d1.scale(&ratio);
    let n = shape.len();
    let (k0, u0) = shape.locate(&d0);
    let (k1, u1) = shape.locate(&d1);
    let mut corners = Vec::new();
    if k0 != k1 || u0 > u1 {
        let mut k = (k0 + 1) % n;
        loop {
            corners.push(c + &shape.vertices()[k].scale(w2));
            if k == k1 {
                break;
            }
            k = (k + 1) % n;
        }
    }
    let mut out: Vec<Vec2> = pts[..=i0].to_vec();
    out.push(e0);
    out.push(a);
    out.extend(corners);
    out.push(b);
    out.push(e1);
    out.extend_from_slice(&pts[i1 + 1..]);
    out.dedup();
    Some(out)
}

/// Charts `U₁, …, U_k` with witnesses `x₀, …, x_k`, chart `i` containing
/// `x_{i-1}` and `x_i`.
#[derive(Clone, Debug)]
pub struct ChartChain {
    charts: Vec<ConeChart>,
    witnesses: Vec<AmbientPoint>,
}

impl ChartChain {
    pub fn new(charts: Vec<ConeChart>, witnesses: Vec<AmbientPoint>) -> Result<Self, MoveError> {
        if charts.is_empty() || witnesses.len() != charts.len() + 1 {
            return Err(MoveError::ChainBroken(0));
        }
        Ok(ChartChain { charts, witnesses })
    }

    pub fn charts(&self) -> &[ConeChart] {
        &self.charts
    }

    pub fn witnesses(&self) -> &[AmbientPoint] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// Checks the witness and avoidance conditions.
    pub fn check(&self, f: &[AmbientPoint]) -> Result<(), MoveError> {
        for (i, chart) in self.charts.iter().enumerate() {
            if !chart.image_contains(&self.witnesses[i]) || !chart.image_contains(&self.witnesses[i + 1]) {
                return Err(MoveError::ChainBroken(i));
            }
            if f.iter().any(|p| chart.image_contains(p)) {
                return Err(MoveError::ChartMeetsF(i));
            }
        }
        Ok(())
    }
}

/// Covers a planar path avoiding `f` by [`disc_chart`]s. Chart `i` is
/// centered at `x_{i-1}` with three quarters of its [`clearance`] as width;
/// `x_i` is a step of half the clearance along the path rounded to a dyadic
/// grid, or the next waypoint if that is closer.
pub fn cover_path(path: &PlPath, f: &[AmbientPoint]) -> Result<ChartChain, MoveError> {
    let ambient = path.ambient();
    let view = path.view();
    let pts = path
        .view_points()
        .ok_or(MoveError::Unsupported("chains need a planar model"))?;
    let shape = cycle_of(ambient)
        .ok_or(MoveError::UnsupportedAmbient)?
        .shape()
        .clone();
    let mut cur = pts[0].clone();
    let mut next = 1;
    let mut charts = Vec::new();
    let mut witnesses = vec![path.start().clone()];
    if pts.len() == 1 {
        let rho = clearance(ambient, view, &cur, f);
        if !rho.is_positive() {
            return Err(MoveError::ChartMeetsF(0));
        }
        charts.push(disc_chart(ambient, view, cur.clone(), rho / qi(2))?);
        witnesses.push(path.start().clone());
        return ChartChain::new(charts, witnesses);
    }
    while next < pts.len() {
        if charts.len() >= CHAIN_BOUND {
            return Err(MoveError::ChainTooLong);
        }
        let rho = clearance(ambient, view, &cur, f);
        if !rho.is_positive() {
            return Err(MoveError::ChartMeetsF(charts.len()));
        }
        let w0 = &rho * q(3, 4);
        let step = &rho / qi(2);
        charts.push(disc_chart(ambient, view, cur.clone(), w0.clone())?);
        let target = &pts[next];
        let dist = shape.gauge(&(target - &cur));
        if dist <= step {
            cur = target.clone();
            next += 1;
        } else {
            let exact = cur.lerp(target, &(&step / dist));
            // Rounding keeps denominators from growing along long chains.
            let snapped = snap(&exact, &(&step / qi(8)));
            cur = if shape.gauge(&(&snapped - &cur)) < w0
                && clearance(ambient, view, &snapped, f).is_positive()
            {
                snapped
            } else {
                exact
            };
        }
        witnesses.push(ambient.from_view(view, &cur));
    }
    ChartChain::new(charts, witnesses)
}

/// Nearest point of the dyadic grid with spacing at most `fine`.
fn snap(v: &Vec2, fine: &Rational) -> Vec2 {
    let mut den = qi(1);
    while (qi(1) / &den) > *fine {
        den *= qi(2);
    }
    let round = |x: &Rational| (x * &den + q(1, 2)).floor() / &den;
    Vec2::new(round(&v.x), round(&v.y))
}

/// The composite of moves `g_i(x_{i-1}) = x_i` inside the charts of a
/// chain, checked to send `x` to `y` and to fix `f`.
pub fn chain_move(
    ambient: &AmbientSpace,
    x: &AmbientPoint,
    y: &AmbientPoint,
    f: &[AmbientPoint],
    chain: &ChartChain,
) -> Result<Homeo, MoveError> {
    let w = chain.witnesses();
    if w[0] != *x {
        return Err(MoveError::ChainBroken(0));
    }
    if w[w.len() - 1] != *y {
        return Err(MoveError::ChainBroken(chain.len() - 1));
    }
    if chain.charts().iter().any(|c| c.ambient() != ambient) {
        return Err(MoveError::UnsupportedAmbient);
    }
    chain.check(f)?;
    let mut h = Homeo::Identity;
    for (i, chart) in chain.charts().iter().enumerate() {
        h = h.then(move_in_cone(chart, &w[i], &w[i + 1])?);
    }
    if h.eval(x)? != *y {
        return Err(MoveError::Unverified("chain move misses its endpoint"));
    }
    for p in f {
        if h.eval(p)? != *p {
            return Err(MoveError::Unverified("chain move moves an avoided point"));
        }
    }
    Ok(h)
}

/// A homeomorphism sending `sources[i]` to `targets[i]` for every `i`,
/// with at most [`STRONG_N_BOUND`] points.
pub fn strong_n_extend(
    ambient: &AmbientSpace,
    sources: &[AmbientPoint],
    targets: &[AmbientPoint],
) -> Result<Homeo, MoveError> {
    strong_n_extend_bounded(ambient, sources, targets, STRONG_N_BOUND)
}

/// [`strong_n_extend`] with an explicit bound on the number of points.
pub fn strong_n_extend_bounded(
    ambient: &AmbientSpace,
    sources: &[AmbientPoint],
    targets: &[AmbientPoint],
    bound: usize,
) -> Result<Homeo, MoveError> {
    let stages = strong_n_stages(ambient, sources, targets, bound)?;
    let h = stages.into_iter().fold(Homeo::Identity, Homeo::then);
    for (s, t) in sources.iter().zip(targets) {
        if h.eval(s)? != *t {
            return Err(MoveError::Unverified("a source misses its target"));
        }
    }
    Ok(h)
}

/// The stages of the induction: stage `i` carries the current image of
/// `sources[i]` to `targets[i]` and fixes `targets[..i]`.
///
/// The point is moved along a straight path, rerouted around the targets
/// already placed and covered by a chart chain. Two poles of a suspension
/// are joined through a point of the middle band, one view per leg.
pub fn strong_n_stages(
    ambient: &AmbientSpace,
    sources: &[AmbientPoint],
    targets: &[AmbientPoint],
    bound: usize,
) -> Result<Vec<Homeo>, MoveError> {
    if sources.len() != targets.len() {
        return Err(MoveError::LengthMismatch);
    }
    if sources.len() > bound {
        return Err(MoveError::TooManyPoints);
    }
    match ambient {
        AmbientSpace::OpenSquare { .. } | AmbientSpace::Suspension { .. } => {}
        AmbientSpace::AbstractCone { .. } => return Err(MoveError::UnsupportedAmbient),
    }
    for list in [sources, targets] {
        for (i, p) in list.iter().enumerate() {
            if !ambient.contains(p) {
                return Err(MoveError::OutsideAmbient);
            }
            if list[..i].contains(p) {
                return Err(MoveError::DuplicatePoint);
            }
        }
    }
    let mut h = Homeo::Identity;
    let mut stages = Vec::with_capacity(sources.len());
    for (i, (s, t)) in sources.iter().zip(targets).enumerate() {
        let placed = &targets[..i];
        let cur = h.eval(s)?;
        let mut stage = Homeo::Identity;
        if cur != *t {
            let legs = match ambient.common_view(&cur, t) {
                Some(_) => vec![(cur.clone(), t.clone())],
                None => {
                    let m = band_point(ambient, placed);
                    vec![(cur.clone(), m.clone()), (m, t.clone())]
                }
            };
            for (a, b) in legs {
                let straight = PlPath::segment(ambient, &a, &b)?;
                let path = reroute_path(&straight, placed, &DiscProvider)?;
                let chain = cover_path(&path, placed)?;
                stage = stage.then(chain_move(ambient, &a, &b, placed, &chain)?);
            }
        }
        h = h.then(stage.clone());
        stages.push(stage);
    }
    Ok(stages)
}

/// A point of the middle band of a suspension outside `avoid`.
fn band_point(ambient: &AmbientSpace, avoid: &[AmbientPoint]) -> AmbientPoint {
    let mut level = qi(0);
    let mut k = 0i64;
    loop {
        let p = AmbientPoint::Band {
            base: BasePoint::Vertex(0),
            level: level.clone(),
        };
        if ambient.contains(&p) && !avoid.contains(&p) {
            return p;
        }
        k += 1;
        level = q(1, k + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseGraph;
    use crate::chart::Pole;

    fn f0() -> (AmbientSpace, ConeChart) {
        let amb = AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(3).unwrap(),
        };
        let phi = ConeChart::identity(&amb).unwrap();
        (amb, phi)
    }

    fn square() -> AmbientSpace {
        AmbientSpace::open_square(qi(8)).unwrap()
    }

    fn f2_phi() -> ConeChart {
        let profile =
            PlHomeo::new(vec![(qi(0), q(1, 2)), (qi(1), qi(1)), (qi(2), qi(2))], true, true).unwrap();
        ConeChart::planar(
            &square(),
            CycleShape::square(),
            Vec2::zero(),
            qi(2),
            profile,
            None,
        )
        .unwrap()
    }

    fn pt(x: Rational, y: Rational) -> AmbientPoint {
        AmbientPoint::plane(x, y)
    }

    #[test]
    fn slide_on_the_triod() {
        let (_, phi) = f0();
        let a = BasePoint::Vertex(0);
        let x = phi.at(&a, &qi(1));
        let g = radial_slide(&phi, &x, &qi(5)).unwrap();
        assert_eq!(g.eval(&x).unwrap(), phi.at(&a, &qi(5)));
        for b in [1, 2] {
            for t in [q(1, 3), qi(1), qi(5), qi(9)] {
                let z = phi.at(&BasePoint::Vertex(b), &t);
                assert_eq!(g.eval(&z).unwrap(), z);
            }
        }
        assert_eq!(g.eval(&AmbientPoint::Apex).unwrap(), AmbientPoint::Apex);
        assert!(matches!(radial_slide(&phi, &x, &qi(1)).unwrap(), Homeo::Identity));
        assert_eq!(
            radial_slide(&phi, &AmbientPoint::Apex, &qi(2)).unwrap_err(),
            MoveError::VertexInput
        );
        assert_eq!(
            radial_slide(&phi, &x, &qi(0)).unwrap_err(),
            MoveError::InvalidTarget
        );
    }

    #[test]
    fn slide_round_trips_along_the_ray() {
        let phi = f2_phi();
        let x = pt(qi(1), q(1, 3));
        let g = radial_slide(&phi, &x, &qi(6)).unwrap();
        let gx = g.eval(&x).unwrap();
        assert_eq!(phi.level_of(&gx), Some(crate::num::ExtendedLevel::int(6)));
        for z in [pt(q(1, 2), qi(1)), pt(qi(-1), q(1, 7)), pt(q(3, 5), q(1, 5))] {
            assert_eq!(g.eval_inverse(&g.eval(&z).unwrap()).unwrap(), z);
        }
    }

    #[test]
    fn move_in_cone_cases() {
        let (_, phi) = f0();
        let a = BasePoint::Vertex(0);
        let h = move_in_cone(&phi, &phi.at(&a, &qi(1)), &phi.at(&a, &qi(5))).unwrap();
        assert!(matches!(h, Homeo::Slide(_)));
        let other = phi.at(&BasePoint::Vertex(1), &qi(1));
        assert!(matches!(
            move_in_cone(&phi, &phi.at(&a, &qi(1)), &other),
            Err(MoveError::Unsupported(_))
        ));
        assert!(matches!(
            move_in_cone(&phi, &other, &other).unwrap(),
            Homeo::Identity
        ));

        let phi = f2_phi();
        let x = pt(q(1, 8), qi(0));
        let h = move_in_cone(&phi, &x, &phi.vertex()).unwrap();
        assert_eq!(h.eval(&x).unwrap(), phi.vertex());
        assert_eq!(h.eval_inverse(&phi.vertex()).unwrap(), x);
        let far = pt(qi(5), qi(5));
        assert_eq!(h.eval(&far).unwrap(), far);
        assert!(!h.in_support(&far));
    }

    #[test]
    fn move_between_two_rays() {
        let phi = f2_phi();
        let x = pt(qi(1), q(1, 2));
        let y = pt(q(-1, 3), q(-1, 2));
        let h = move_in_cone(&phi, &x, &y).unwrap();
        assert_eq!(h.eval(&x).unwrap(), y);
        assert_eq!(h.eval_inverse(&y).unwrap(), x);
        assert_eq!(h.provenance(), crate::homeo::Provenance::ConstructiveSurrogate);
    }

    #[test]
    fn path_evaluation_and_meeting() {
        let amb = square();
        let p = PlPath::planar(&amb, None, &[Vec2::new(qi(-1), qi(0)), Vec2::new(qi(1), qi(0))]).unwrap();
        assert_eq!(p.eval(&q(1, 2)).unwrap(), pt(qi(0), qi(0)));
        assert!(p.meets(&pt(q(1, 3), qi(0))));
        assert!(!p.meets(&pt(q(1, 3), q(1, 100))));

        let (amb, phi) = f0();
        let a = BasePoint::Vertex(0);
        let b = BasePoint::Vertex(1);
        let path = PlPath::new(
            &amb,
            None,
            vec![phi.at(&a, &qi(1)), AmbientPoint::Apex, phi.at(&b, &qi(1))],
        )
        .unwrap();
        assert!(path.meets(&AmbientPoint::Apex));
        assert!(path.meets(&phi.at(&a, &qi(3))));
        assert!(!path.meets(&phi.at(&a, &q(1, 2))));
        assert_eq!(path.eval(&q(1, 4)).unwrap(), phi.at(&a, &qi(2)));
        assert!(PlPath::new(&amb, None, vec![phi.at(&a, &qi(1)), phi.at(&b, &qi(1))]).is_err());
    }

    #[test]
    fn reroute_around_points() {
        let amb = square();
        let p = PlPath::planar(&amb, None, &[Vec2::new(qi(-3), qi(0)), Vec2::new(qi(3), qi(0))]).unwrap();
        assert_eq!(reroute_path(&p, &[], &DiscProvider).unwrap(), p);
        let f = vec![pt(qi(0), qi(0)), pt(qi(1), qi(0)), pt(qi(2), qi(0))];
        let r = reroute_path(&p, &f, &DiscProvider).unwrap();
        assert_eq!(r.start(), p.start());
        assert_eq!(r.end(), p.end());
        assert!(f.iter().all(|x| !r.meets(x)));
        assert_eq!(
            reroute_path(&p, &[p.start().clone()], &DiscProvider),
            Err(MoveError::EndpointInF)
        );
    }

    #[test]
    fn reroute_rejects_small_bases() {
        for n in [1, 2] {
            let amb = AmbientSpace::AbstractCone {
                base: BaseGraph::discrete(n).unwrap(),
            };
            let phi = ConeChart::identity(&amb).unwrap();
            let a = BasePoint::Vertex(0);
            let b = BasePoint::Vertex(n - 1);
            let path = PlPath::new(
                &amb,
                None,
                vec![phi.at(&a, &qi(1)), AmbientPoint::Apex, phi.at(&b, &qi(2))],
            )
            .unwrap();
            assert_eq!(
                reroute_path(&path, &[AmbientPoint::Apex], &DiscProvider),
                Err(MoveError::BaseTooSmall)
            );
        }
    }

    #[test]
    fn chain_along_the_axis() {
        let amb = square();
        let x = pt(qi(-1), qi(0));
        let y = pt(qi(1), qi(0));
        let f = vec![pt(qi(0), q(1, 2))];
        let path = PlPath::segment(&amb, &x, &y).unwrap();
        let chain = cover_path(&path, &f).unwrap();
        let h = chain_move(&amb, &x, &y, &f, &chain).unwrap();
        assert_eq!(h.eval(&x).unwrap(), y);
        assert_eq!(h.eval(&f[0]).unwrap(), f[0]);

        let bad = ChartChain::new(
            vec![disc_chart(&amb, None, Vec2::new(qi(-1), qi(0)), q(1, 4)).unwrap()],
            vec![x.clone(), y.clone()],
        )
        .unwrap();
        assert_eq!(
            chain_move(&amb, &x, &y, &f, &bad).unwrap_err(),
            MoveError::ChainBroken(0)
        );
    }

    #[test]
    fn three_points_in_the_square() {
        let amb = square();
        let s = vec![pt(qi(-2), qi(0)), pt(qi(0), qi(0)), pt(qi(2), qi(1))];
        let t = vec![pt(qi(0), qi(0)), pt(qi(2), qi(0)), pt(qi(-1), qi(-1))];
        let h = strong_n_extend(&amb, &s, &t).unwrap();
        for (a, b) in s.iter().zip(&t) {
            assert_eq!(h.eval(a).unwrap(), *b);
        }
        assert_eq!(
            strong_n_extend(&amb, &[s[0].clone(), s[0].clone()], &t[..2]).unwrap_err(),
            MoveError::DuplicatePoint
        );
    }

    #[test]
    fn two_points_to_the_poles() {
        let amb = AmbientSpace::suspension(CycleShape::square());
        let s = vec![
            AmbientPoint::Band {
                base: BasePoint::Vertex(0),
                level: q(1, 2),
            },
            AmbientPoint::Band {
                base: BasePoint::edge(1, q(1, 3)),
                level: q(-1, 4),
            },
        ];
        let t = vec![Pole::North.point(), Pole::South.point()];
        let h = strong_n_extend(&amb, &s, &t).unwrap();
        assert_eq!(h.eval(&s[0]).unwrap(), AmbientPoint::North);
        assert_eq!(h.eval(&s[1]).unwrap(), AmbientPoint::South);
    }
}
