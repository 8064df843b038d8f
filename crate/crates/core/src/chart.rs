//! Cone charts `φ : Y × (0, ∞] → U` over the ambient models.
//!
//! Charts are reference-counted handles; two handles are the same chart iff
//! they point at the same allocation.

use alloc::rc::Rc;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::ambient::{AmbientError, AmbientPoint, AmbientSpace, CycleShape, View};
use crate::base::{BaseError, BaseFunction, BaseGraph, BaseIso, BasePoint};
use crate::geom::Vec2;
use crate::num::{ExtendedLevel, Rational};
use crate::pl::{PlError, PlHomeo};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("base point is not in the chart's base")]
    WrongBase,
    #[error("levels must be positive")]
    NonPositiveLevel,
    #[error("chart variant does not fit the ambient space")]
    AmbientMismatch,
    #[error("width profile must be an increasing map of (0, ∞] starting at a positive value")]
    BadProfile,
    #[error("chart image leaves the ambient space")]
    ImageOutsideAmbient,
    #[error("offset function does not live on the chart's base")]
    OffsetMismatch,
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Result of inverting a chart at an ambient point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartPreimage {
    Interior(BasePoint, Rational),
    Vertex,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pole {
    Apex,
    North,
    South,
}

impl Pole {
    pub fn point(self) -> AmbientPoint {
        match self {
            Pole::Apex => AmbientPoint::Apex,
            Pole::North => AmbientPoint::North,
            Pole::South => AmbientPoint::South,
        }
    }
}

/// `φ(y, t) = (ι(y), ±(t + d(y)))` on a cone or suspension.
#[derive(Clone, Debug)]
pub struct RadialChart {
    pub(crate) base: BaseGraph,
    pub(crate) iso: BaseIso,
    pub(crate) iso_inv: BaseIso,
    pub(crate) offset: BaseFunction,
    pub(crate) pole: Pole,
}

impl RadialChart {
    pub fn iso(&self) -> &BaseIso {
        &self.iso
    }

    pub fn offset(&self) -> &BaseFunction {
        &self.offset
    }

    pub fn pole(&self) -> Pole {
        self.pole
    }

    /// Ambient level threshold of the region at chart level `a` above the
    /// ambient base point `w`, measured away from the pole.
    pub(crate) fn threshold(&self, w: &BasePoint, a: &Rational) -> Rational {
        let y = self.iso_inv.apply(w).expect("ambient base point");
        a + self.offset.eval(&self.base, &y)
    }
}

/// `φ(y, t) = c + (scale / L(t)) κ(y)` where `κ` runs around a convex
/// polygon and `L` is an increasing PL map with `L(0+) > 0`.
#[derive(Clone, Debug)]
pub struct PlanarChart {
    pub(crate) cycle: CycleShape,
    pub(crate) center: Vec2,
    pub(crate) scale: Rational,
    pub(crate) profile: PlHomeo,
    pub(crate) view: Option<View>,
}

impl PlanarChart {
    pub fn center(&self) -> &Vec2 {
        &self.center
    }

    pub fn cycle(&self) -> &CycleShape {
        &self.cycle
    }

    pub fn view(&self) -> Option<View> {
        self.view
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn profile(&self) -> &PlHomeo {
        &self.profile
    }

    /// Half-width of the level polygon at level `t` (`0` at `∞`).
    pub fn width(&self, t: &ExtendedLevel) -> Rational {
        match t {
            ExtendedLevel::Infinity => Rational::zero(),
            ExtendedLevel::Finite(t) => &self.scale / self.profile.eval_rational(t).expect("positive level"),
        }
    }

    /// Supremum of the widths, attained as the level tends to zero.
    pub fn max_width(&self) -> Rational {
        &self.scale / &self.profile.knots()[0].1
    }

    /// Level at which the polygon has half-width `w`, for `0 < w < max_width`.
    pub fn level_at_width(&self, w: &Rational) -> Rational {
        self.profile
            .inverse()
            .eval_rational(&(&self.scale / w))
            .expect("width inside the profile range")
    }

    /// Chart level of a view-plane point, `None` outside the image and
    /// `∞` at the center.
    pub fn level_of_plane(&self, v: &Vec2) -> Option<ExtendedLevel> {
        let d = v - &self.center;
        if d.is_zero() {
            return Some(ExtendedLevel::Infinity);
        }
        let g = self.cycle.shape().gauge(&d);
        if g >= self.max_width() {
            return None;
        }
        Some(ExtendedLevel::Finite(self.level_at_width(&g)))
    }
}

/// The chart `γ ∘ β ∘ α ∘ φ` obtained by promoting a `k`-interlaced pair.
#[derive(Clone, Debug)]
pub struct PromotedChart {
    pub(crate) inner: ConeChart,
    pub(crate) partner: ConeChart,
    pub(crate) k: u32,
    pub(crate) r: Rational,
    pub(crate) alpha: RadialMap,
    pub(crate) beta: RadialMap,
    pub(crate) gamma: RadialMap,
}

impl PromotedChart {
    pub fn inner(&self) -> &ConeChart {
        &self.inner
    }

    pub fn partner(&self) -> &ConeChart {
        &self.partner
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn alpha(&self) -> &RadialMap {
        &self.alpha
    }

    pub fn beta(&self) -> &RadialMap {
        &self.beta
    }

    pub fn gamma(&self) -> &RadialMap {
        &self.gamma
    }

    /// Whether `γ` fixes every point at this partner level. The slack
    /// containment `inner(Y × (2k-1+r, ∞]) ⊇ ψ(Y × [2k, ∞])` covers partner
    /// levels from `2k` up; `k`-interlacing gives `ψ(2k-4) ⊇ inner[2k-3]`,
    /// covering partner levels up to `2k-4` when `k >= 3`.
    fn fixed_by_gamma(&self, partner_level: &ExtendedLevel) -> bool {
        let k = i64::from(self.k);
        match partner_level {
            ExtendedLevel::Infinity => true,
            ExtendedLevel::Finite(v) => {
                *v >= Rational::from_integer((2 * k).into())
                    || (k >= 3 && *v <= Rational::from_integer((2 * k - 4).into()))
            }
        }
    }

    fn undo_alpha(&self, pre: ChartPreimage) -> ChartPreimage {
        match pre {
            ChartPreimage::Interior(y, s) => {
                let t = self
                    .alpha
                    .levels
                    .inverse()
                    .eval_rational(&s)
                    .expect("levels of (0, ∞)");
                ChartPreimage::Interior(y, t)
            }
            other => other,
        }
    }

    fn invert_through_gamma(&self, x: &AmbientPoint) -> ChartPreimage {
        if self.gamma.chart != self.inner {
            let x = self.beta.apply_inverse(&self.gamma.apply_inverse(x));
            return self.undo_alpha(self.inner.invert(&x));
        }
        let pre = match self.inner.invert(x) {
            // The promoted chart equals its input up to `2k-1`.
            ChartPreimage::Interior(y, s) if s <= self.agrees_below() => {
                return ChartPreimage::Interior(y, s);
            }
            ChartPreimage::Interior(y, s) => {
                let u = self
                    .gamma
                    .levels
                    .inverse()
                    .eval_rational(&s)
                    .expect("levels of (0, ∞)");
                let x1 = if u == s { x.clone() } else { self.inner.at(&y, &u) };
                let x2 = self.beta.apply_inverse(&x1);
                if x2 == x1 {
                    ChartPreimage::Interior(y, u)
                } else {
                    self.inner.invert(&x2)
                }
            }
            ChartPreimage::Vertex => {
                let x2 = self.beta.apply_inverse(x);
                if x2 == *x {
                    ChartPreimage::Vertex
                } else {
                    self.inner.invert(&x2)
                }
            }
            ChartPreimage::Outside => ChartPreimage::Outside,
        };
        self.undo_alpha(pre)
    }

    /// Levels up to which the promoted chart coincides with its input.
    pub fn agrees_below(&self) -> Rational {
        Rational::from_integer((2 * i64::from(self.k) - 1).into())
    }
}

#[derive(Clone, Debug)]
pub enum ChartKind {
    Radial(RadialChart),
    Planar(PlanarChart),
    Promoted(PromotedChart),
}

#[derive(Debug)]
struct ChartData {
    ambient: AmbientSpace,
    base: BaseGraph,
    kind: ChartKind,
}

#[derive(Clone, Debug)]
pub struct ConeChart(Rc<ChartData>);

impl PartialEq for ConeChart {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for ConeChart {}

impl fmt::Display for ConeChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            ChartKind::Radial(c) => write!(f, "radial chart at {}", c.pole.point()),
            ChartKind::Planar(c) => write!(f, "planar chart at {}", c.center),
            ChartKind::Promoted(c) => write!(f, "promoted chart (k = {})", c.k),
        }
    }
}

impl ConeChart {
    fn wrap(ambient: AmbientSpace, base: BaseGraph, kind: ChartKind) -> Self {
        ConeChart(Rc::new(ChartData { ambient, base, kind }))
    }

    pub fn radial(
        ambient: &AmbientSpace,
        iso: BaseIso,
        offset: BaseFunction,
        pole: Pole,
    ) -> Result<Self, ChartError> {
        let fits = matches!(
            (ambient, pole),
            (AmbientSpace::AbstractCone { .. }, Pole::Apex)
                | (AmbientSpace::Suspension { .. }, Pole::North | Pole::South)
        );
        if !fits || ambient.base() != Some(iso.target()) {
            return Err(ChartError::AmbientMismatch);
        }
        let base = iso.source().clone();
        if offset.vertex_values().len() != base.vertex_count()
            || offset.edge_knots().len() != base.edges().len()
        {
            return Err(ChartError::OffsetMismatch);
        }
        let iso_inv = iso.inverse();
        Ok(ConeChart::wrap(
            ambient.clone(),
            base.clone(),
            ChartKind::Radial(RadialChart {
                base,
                iso,
                iso_inv,
                offset,
                pole,
            }),
        ))
    }

    /// The chart `(y, t) ↦ (y, t)` of an abstract cone, or of the north
    /// half of a suspension.
    pub fn identity(ambient: &AmbientSpace) -> Result<Self, ChartError> {
        let base = ambient.base().ok_or(ChartError::AmbientMismatch)?;
        let pole = match ambient {
            AmbientSpace::Suspension { .. } => Pole::North,
            _ => Pole::Apex,
        };
        ConeChart::radial(
            ambient,
            BaseIso::identity(base),
            BaseFunction::constant(base, Rational::zero()),
            pole,
        )
    }

    pub fn planar(
        ambient: &AmbientSpace,
        cycle: CycleShape,
        center: Vec2,
        scale: Rational,
        profile: PlHomeo,
        view: Option<View>,
    ) -> Result<Self, ChartError> {
        let knots = profile.knots();
        if !profile.has_open_start()
            || !profile.has_tail()
            || !knots[0].0.is_zero()
            || !knots[0].1.is_positive()
            || !scale.is_positive()
        {
            return Err(ChartError::BadProfile);
        }
        match (ambient, view) {
            (AmbientSpace::OpenSquare { half }, None) => {
                let w0 = &scale / &knots[0].1;
                for v in cycle.shape().vertices() {
                    if (&center + &v.scale(&w0)).cheb() > *half {
                        return Err(ChartError::ImageOutsideAmbient);
                    }
                }
            }
            (AmbientSpace::Suspension { .. }, Some(_)) => {}
            _ => return Err(ChartError::AmbientMismatch),
        }
        let base = cycle.base().clone();
        Ok(ConeChart::wrap(
            ambient.clone(),
            base,
            ChartKind::Planar(PlanarChart {
                cycle,
                center,
                scale,
                profile,
                view,
            }),
        ))
    }

    pub(crate) fn promoted(chart: PromotedChart) -> Self {
        let ambient = chart.inner.ambient().clone();
        let base = chart.inner.base().clone();
        ConeChart::wrap(ambient, base, ChartKind::Promoted(chart))
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.0.ambient
    }

    pub fn base(&self) -> &BaseGraph {
        &self.0.base
    }

    pub fn kind(&self) -> &ChartKind {
        &self.0.kind
    }

    pub fn as_planar(&self) -> Option<&PlanarChart> {
        match self.kind() {
            ChartKind::Planar(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_radial(&self) -> Option<&RadialChart> {
        match self.kind() {
            ChartKind::Radial(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_promoted(&self) -> Option<&PromotedChart> {
        match self.kind() {
            ChartKind::Promoted(c) => Some(c),
            _ => None,
        }
    }

    /// Promotion depth: zero for directly constructed charts.
    pub fn depth(&self) -> usize {
        match self.kind() {
            ChartKind::Promoted(c) => 1 + c.inner.depth(),
            _ => 0,
        }
    }

    pub fn vertex(&self) -> AmbientPoint {
        self.eval_unchecked(&BasePoint::Vertex(0), &ExtendedLevel::Infinity)
    }

    pub fn eval(&self, y: &BasePoint, t: &ExtendedLevel) -> Result<AmbientPoint, ChartError> {
        if !self.base().contains(y) {
            return Err(ChartError::WrongBase);
        }
        if let ExtendedLevel::Finite(v) = t {
            if !v.is_positive() {
                return Err(ChartError::NonPositiveLevel);
            }
        }
        Ok(self.eval_unchecked(y, t))
    }

    /// Evaluation at a finite positive level. Panics on invalid input.
    pub fn at(&self, y: &BasePoint, t: &Rational) -> AmbientPoint {
        self.eval(y, &ExtendedLevel::Finite(t.clone()))
            .expect("valid chart coordinates")
    }

    fn eval_unchecked(&self, y: &BasePoint, t: &ExtendedLevel) -> AmbientPoint {
        match self.kind() {
            ChartKind::Radial(c) => match t {
                ExtendedLevel::Infinity => c.pole.point(),
                ExtendedLevel::Finite(t) => {
                    let base = c.iso.apply(y).expect("point of the chart base");
                    let level = t + c.offset.eval(&c.base, y);
                    match c.pole {
                        Pole::Apex => AmbientPoint::Ray { base, level },
                        Pole::North => AmbientPoint::Band { base, level },
                        Pole::South => AmbientPoint::Band { base, level: -level },
                    }
                }
            },
            ChartKind::Planar(c) => {
                let v = &c.center + &c.cycle.direction(y).scale(&c.width(t));
                self.ambient().from_view(c.view, &v)
            }
            ChartKind::Promoted(c) => {
                if let ExtendedLevel::Finite(v) = t {
                    if *v <= c.agrees_below() {
                        return c.inner.eval_unchecked(y, t);
                    }
                }
                let s = c.alpha.levels.eval(t).expect("levels of (0, ∞]");
                let x = c.inner.eval_unchecked(y, &s);
                let moved = match c.beta.chart.invert(&x) {
                    ChartPreimage::Interior(w, level) => {
                        let image = c.beta.levels.eval_rational(&level).expect("levels of (0, ∞)");
                        if image == level {
                            x.clone()
                        } else {
                            let moved = c.beta.chart.at(&w, &image);
                            if c.fixed_by_gamma(&ExtendedLevel::Finite(image)) {
                                return moved;
                            }
                            moved
                        }
                    }
                    _ => x.clone(),
                };
                if moved == x && c.gamma.chart == c.inner {
                    // γ reparameterizes the inner chart, whose coordinates
                    // of x are already known.
                    let u = c.gamma.levels.eval(&s).expect("levels of (0, ∞]");
                    if u == s {
                        return x;
                    }
                    return c.inner.eval_unchecked(y, &u);
                }
                c.gamma.apply(&moved)
            }
        }
    }

    pub fn invert(&self, x: &AmbientPoint) -> ChartPreimage {
        match self.kind() {
            ChartKind::Radial(c) => {
                let (w, level) = match (c.pole, x) {
                    (Pole::Apex, AmbientPoint::Apex)
                    | (Pole::North, AmbientPoint::North)
                    | (Pole::South, AmbientPoint::South) => return ChartPreimage::Vertex,
                    (Pole::Apex, AmbientPoint::Ray { base, level })
                    | (Pole::North, AmbientPoint::Band { base, level }) => (base, level.clone()),
                    (Pole::South, AmbientPoint::Band { base, level }) => (base, -level),
                    _ => return ChartPreimage::Outside,
                };
                let y = match c.iso_inv.apply(w) {
                    Ok(y) => y,
                    Err(_) => return ChartPreimage::Outside,
                };
                let t = level - c.offset.eval(&c.base, &y);
                if t.is_positive() {
                    ChartPreimage::Interior(y, t)
                } else {
                    ChartPreimage::Outside
                }
            }
            ChartKind::Planar(c) => {
                let v = match self.ambient().to_view(c.view, x) {
                    Some(v) => v,
                    None => return ChartPreimage::Outside,
                };
                match c.level_of_plane(&v) {
                    None => ChartPreimage::Outside,
                    Some(ExtendedLevel::Infinity) => ChartPreimage::Vertex,
                    Some(ExtendedLevel::Finite(t)) => {
                        ChartPreimage::Interior(c.cycle.base_point(&(&v - &c.center)), t)
                    }
                }
            }
            ChartKind::Promoted(c) => {
                let partner_level = match c.beta.chart.invert(x) {
                    ChartPreimage::Interior(w, level) => Some((Some(w), ExtendedLevel::Finite(level))),
                    ChartPreimage::Vertex => Some((None, ExtendedLevel::Infinity)),
                    ChartPreimage::Outside => None,
                };
                match partner_level {
                    // γ⁻¹ fixes x, so only β⁻¹ and the inner chart remain.
                    Some((w, level)) if c.fixed_by_gamma(&level) => {
                        let pre = match (w, level) {
                            (Some(w), ExtendedLevel::Finite(level)) => {
                                let back = c
                                    .beta
                                    .levels
                                    .inverse()
                                    .eval_rational(&level)
                                    .expect("levels of (0, ∞)");
                                if back == level {
                                    c.inner.invert(x)
                                } else {
                                    c.inner.invert(&c.beta.chart.at(&w, &back))
                                }
                            }
                            _ => c.inner.invert(x),
                        };
                        c.undo_alpha(pre)
                    }
                    _ => c.invert_through_gamma(x),
                }
            }
        }
    }

    /// Chart level of `x`: `None` outside the image, `∞` at the vertex.
    pub fn level_of(&self, x: &AmbientPoint) -> Option<ExtendedLevel> {
        match self.invert(x) {
            ChartPreimage::Interior(_, t) => Some(ExtendedLevel::Finite(t)),
            ChartPreimage::Vertex => Some(ExtendedLevel::Infinity),
            ChartPreimage::Outside => None,
        }
    }

    pub fn image_contains(&self, x: &AmbientPoint) -> bool {
        !matches!(self.invert(x), ChartPreimage::Outside)
    }

    /// Membership of `x` in `φ(Y × (a, ∞])` (`closed = false`) or
    /// `φ(Y × [a, ∞])` (`closed = true`).
    pub fn region_contains(&self, a: &ExtendedLevel, closed: bool, x: &AmbientPoint) -> bool {
        match self.level_of(x) {
            None => false,
            Some(ExtendedLevel::Infinity) => true,
            Some(t) => t > *a || (closed && t == *a),
        }
    }
}

/// A homeomorphism of the ambient space that reparameterizes the levels of
/// one chart, `χ(y, t) ↦ χ(y, κ(t))`, and is the identity off the chart.
#[derive(Clone, Debug)]
pub struct RadialMap {
    pub(crate) chart: ConeChart,
    pub(crate) levels: PlHomeo,
}

impl RadialMap {
    /// `levels` must be a homeomorphism of `(0, ∞]` (open start at `(0,0)`
    /// and an infinite tail).
    pub fn new(chart: ConeChart, levels: PlHomeo) -> Result<Self, ChartError> {
        let k = levels.knots();
        if !levels.has_open_start() || !levels.has_tail() || k[0] != (Rational::zero(), Rational::zero()) {
            return Err(ChartError::BadProfile);
        }
        Ok(RadialMap { chart, levels })
    }

    pub fn chart(&self) -> &ConeChart {
        &self.chart
    }

    pub fn levels(&self) -> &PlHomeo {
        &self.levels
    }

    pub fn inverse(&self) -> RadialMap {
        RadialMap {
            chart: self.chart.clone(),
            levels: self.levels.inverse(),
        }
    }

    pub fn apply(&self, x: &AmbientPoint) -> AmbientPoint {
        Self::push(&self.chart, &self.levels, x)
    }

    pub fn apply_inverse(&self, x: &AmbientPoint) -> AmbientPoint {
        Self::push(&self.chart, &self.levels.inverse(), x)
    }

    fn push(chart: &ConeChart, levels: &PlHomeo, x: &AmbientPoint) -> AmbientPoint {
        match chart.invert(x) {
            ChartPreimage::Interior(y, t) => {
                let s = levels.eval_rational(&t).expect("levels of (0, ∞)");
                if s == t {
                    x.clone()
                } else {
                    chart.at(&y, &s)
                }
            }
            _ => x.clone(),
        }
    }

    /// Chart levels `(u, v)` outside of which the map is the identity.
    pub fn moved_levels(&self) -> Option<(Rational, ExtendedLevel)> {
        self.levels.moved_hull()
    }
}
