//! Exact containment decisions between level regions of cone charts.
//!
//! A level region is `χ(Y × [a, ∞])` or `χ(Y × (a, ∞])`. Regions of directly
//! constructed charts are compared by finite exact tests: threshold
//! functions at breakpoints for radial charts, polygon corners against a
//! gauge for planar charts. Regions of promoted charts are images of such
//! regions under radial maps; a containment between them is reduced by
//! pulling one side back through the maps. A radial map can be pulled
//! through a region of its own chart by reparameterizing the level, or
//! through any region it provably fixes setwise. When neither applies the
//! answer is [`None`].

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::base::{transported_breakpoints, BasePoint};
use crate::chart::{ChartKind, ConeChart, PlanarChart, RadialChart, RadialMap};
use crate::geom::Vec2;
use crate::num::{ExtendedLevel, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("charts live in different ambient spaces")]
    AmbientMismatch,
    #[error("containment {0} could not be decided")]
    Undecided(&'static str),
}

/// A set of ambient points described by chart levels and radial maps.
#[derive(Clone, Debug)]
pub enum RegionExpr {
    Level {
        chart: ConeChart,
        level: ExtendedLevel,
        closed: bool,
    },
    /// `g(R)`, or `g⁻¹(R)` when `inverse` is set.
    Image {
        map: RadialMap,
        inverse: bool,
        inner: Box<RegionExpr>,
    },
}

impl RegionExpr {
    pub fn open(chart: &ConeChart, level: ExtendedLevel) -> Self {
        RegionExpr::Level {
            chart: chart.clone(),
            level,
            closed: false,
        }
    }

    pub fn closed(chart: &ConeChart, level: ExtendedLevel) -> Self {
        RegionExpr::Level {
            chart: chart.clone(),
            level,
            closed: true,
        }
    }

    fn pin(&self, into: &mut BTreeMap<usize, ConeChart>) {
        match self {
            RegionExpr::Level { chart, .. } => {
                into.entry(chart_id(chart)).or_insert_with(|| chart.clone());
            }
            RegionExpr::Image { map, inner, .. } => {
                into.entry(chart_id(map.chart()))
                    .or_insert_with(|| map.chart().clone());
                inner.pin(into);
            }
        }
    }

    fn key(&self) -> Vec<KeyPart> {
        let mut out = Vec::new();
        self.push_key(&mut out);
        out
    }

    fn push_key(&self, out: &mut Vec<KeyPart>) {
        match self {
            RegionExpr::Level { chart, level, closed } => {
                out.push(KeyPart::Level(chart_id(chart), level.clone(), *closed))
            }
            RegionExpr::Image { map, inverse, inner } => {
                out.push(KeyPart::Map(
                    chart_id(map.chart()),
                    map.levels().knots().to_vec(),
                    *inverse,
                ));
                inner.push_key(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum KeyPart {
    Level(usize, ExtendedLevel, bool),
    Map(usize, Vec<(Rational, Rational)>, bool),
}

fn chart_id(c: &ConeChart) -> usize {
    // Charts are compared by allocation; the address is a stable identity
    // while the chart is alive.
    c.kind() as *const ChartKind as usize
}

fn same_map(a: &RadialMap, b: &RadialMap) -> bool {
    a.chart() == b.chart() && a.levels() == b.levels()
}

fn level_map(map: &RadialMap, inverse: bool, a: &ExtendedLevel) -> ExtendedLevel {
    let levels = if inverse {
        map.levels().inverse()
    } else {
        map.levels().clone()
    };
    levels.eval(a).expect("levels of (0, ∞]")
}

/// Containment decisions with a memo table. Only settled answers are
/// memoized, since an undecided answer may be an artifact of the depth
/// budget.
#[derive(Debug, Default)]
pub struct Prover {
    memo: BTreeMap<(Vec<KeyPart>, Vec<KeyPart>), bool>,
    // Keys name charts by address, so every chart in a key is kept alive.
    pinned: BTreeMap<usize, ConeChart>,
}

const DEPTH: usize = 40;

impl Prover {
    pub fn new() -> Self {
        Prover::default()
    }

    /// Decides `outer ⊇ inner`.
    pub fn contains(&mut self, outer: &RegionExpr, inner: &RegionExpr) -> Option<bool> {
        self.contains_at(outer, inner, DEPTH)
    }

    fn contains_at(&mut self, outer: &RegionExpr, inner: &RegionExpr, depth: usize) -> Option<bool> {
        if depth == 0 {
            return None;
        }
        let outer = normalize(outer);
        let inner = normalize(inner);
        let key = (outer.key(), inner.key());
        if let Some(&ans) = self.memo.get(&key) {
            return Some(ans);
        }
        let ans = self.decide(&outer, &inner, depth);
        if let Some(ans) = ans {
            outer.pin(&mut self.pinned);
            inner.pin(&mut self.pinned);
            self.memo.insert(key, ans);
        }
        ans
    }

    fn decide(&mut self, outer: &RegionExpr, inner: &RegionExpr, depth: usize) -> Option<bool> {
        if let (
            RegionExpr::Level {
                chart: c1,
                level: a,
                closed: k1,
            },
            RegionExpr::Level {
                chart: c2,
                level: b,
                closed: k2,
            },
        ) = (outer, inner)
        {
            if c1.as_promoted().is_none() && c2.as_promoted().is_none() {
                return base_contains(c1, a, *k1, c2, b, *k2);
            }
        }
        if let RegionExpr::Image {
            map,
            inverse,
            inner: x,
        } = outer
        {
            if let Some(pulled) = self.pull(inner, map, *inverse, depth) {
                if let Some(ans) = self.contains_at(x, &pulled, depth - 1) {
                    return Some(ans);
                }
            }
        }
        if let RegionExpr::Image {
            map,
            inverse,
            inner: x,
        } = inner
        {
            if let Some(pulled) = self.pull(outer, map, *inverse, depth) {
                return self.contains_at(&pulled, x, depth - 1);
            }
        }
        None
    }

    /// `h⁻¹(R)` for `h = map` (or `map⁻¹` when `inverse`), when it is again
    /// expressible without that map.
    fn pull(
        &mut self,
        region: &RegionExpr,
        map: &RadialMap,
        inverse: bool,
        depth: usize,
    ) -> Option<RegionExpr> {
        let candidate = normalize(&RegionExpr::Image {
            map: map.clone(),
            inverse: !inverse,
            inner: Box::new(region.clone()),
        });
        if !matches!(&candidate, RegionExpr::Image { map: m, inner, .. }
            if same_map(m, map) && inner.key() == region.key())
        {
            return Some(candidate);
        }
        if self.fixes(map, region, depth) {
            return Some(region.clone());
        }
        None
    }

    /// Whether the radial map sends `region` onto itself: it contains the
    /// whole moved part `χ(u, ∞]`, or sits inside the fixed part `χ[v, ∞]`.
    fn fixes(&mut self, map: &RadialMap, region: &RegionExpr, depth: usize) -> bool {
        let (u, v) = match map.moved_levels() {
            None => return true,
            Some(h) => h,
        };
        let chart = map.chart();
        let above_u = RegionExpr::open(chart, ExtendedLevel::Finite(u));
        if self.contains_at(region, &above_u, depth - 1) == Some(true) {
            return true;
        }
        if let ExtendedLevel::Finite(_) = v {
            let from_v = RegionExpr::closed(chart, v);
            if self.contains_at(&from_v, region, depth - 1) == Some(true) {
                return true;
            }
        }
        false
    }
}

/// Rewrites promoted-chart regions through their defining maps and applies
/// same-chart reparameterizations and cancellations.
pub fn normalize(r: &RegionExpr) -> RegionExpr {
    match r {
        RegionExpr::Level { chart, level, closed } => match chart.kind() {
            ChartKind::Promoted(p) => {
                let below = match level {
                    ExtendedLevel::Finite(a) => *a <= p.agrees_below(),
                    ExtendedLevel::Infinity => false,
                };
                if below {
                    normalize(&RegionExpr::Level {
                        chart: p.inner().clone(),
                        level: level.clone(),
                        closed: *closed,
                    })
                } else {
                    let lowered = RegionExpr::Level {
                        chart: p.inner().clone(),
                        level: level_map(p.alpha(), false, level),
                        closed: *closed,
                    };
                    let beta = RegionExpr::Image {
                        map: p.beta().clone(),
                        inverse: false,
                        inner: Box::new(lowered),
                    };
                    normalize(&RegionExpr::Image {
                        map: p.gamma().clone(),
                        inverse: false,
                        inner: Box::new(beta),
                    })
                }
            }
            _ => r.clone(),
        },
        RegionExpr::Image { map, inverse, inner } => {
            if let RegionExpr::Level { chart, level, closed } = inner.as_ref() {
                if chart == map.chart() {
                    return normalize(&RegionExpr::Level {
                        chart: chart.clone(),
                        level: level_map(map, *inverse, level),
                        closed: *closed,
                    });
                }
            }
            let inner = normalize(inner);
            match &inner {
                RegionExpr::Level { chart, level, closed } if chart == map.chart() => RegionExpr::Level {
                    chart: chart.clone(),
                    level: level_map(map, *inverse, level),
                    closed: *closed,
                },
                RegionExpr::Image {
                    map: m2,
                    inverse: i2,
                    inner: x,
                } if same_map(m2, map) && *i2 != *inverse => x.as_ref().clone(),
                _ => RegionExpr::Image {
                    map: map.clone(),
                    inverse: *inverse,
                    inner: Box::new(inner),
                },
            }
        }
    }
}

/// Comparison between regions of directly constructed charts.
fn base_contains(
    c1: &ConeChart,
    a: &ExtendedLevel,
    closed1: bool,
    c2: &ConeChart,
    b: &ExtendedLevel,
    closed2: bool,
) -> Option<bool> {
    let b_fin = match b {
        ExtendedLevel::Infinity => {
            if !closed2 {
                return Some(true);
            }
            return Some(c1.region_contains(a, closed1, &c2.vertex()));
        }
        ExtendedLevel::Finite(b) => b,
    };
    let a_fin = match a {
        ExtendedLevel::Infinity => return Some(false),
        ExtendedLevel::Finite(a) => a,
    };
    let strict = !closed1 && closed2;
    match (c1.kind(), c2.kind()) {
        (ChartKind::Radial(r1), ChartKind::Radial(r2)) => {
            if r1.pole() != r2.pole() {
                return Some(false);
            }
            let gap = radial_min_gap(r1, a_fin, r2, b_fin);
            Some(if strict {
                gap.is_positive()
            } else {
                !gap.is_negative()
            })
        }
        (ChartKind::Planar(p1), ChartKind::Planar(p2)) => {
            if p1.view() != p2.view() {
                return None;
            }
            let w1 = p1.width(a);
            let w2 = p2.width(&ExtendedLevel::Finite(b_fin.clone()));
            for v in p2.cycle().shape().vertices() {
                let corner = p2.center() + &v.scale(&w2);
                let g = p1.cycle().shape().gauge(&(&corner - p1.center()));
                let ok = if strict { g < w1 } else { g <= w1 };
                if !ok {
                    return Some(false);
                }
            }
            Some(true)
        }
        _ => None,
    }
}

/// Minimum over the ambient base of `θ₂ - θ₁`, where `θᵢ` is the ambient
/// threshold of the region at the given level.
fn radial_min_gap(r1: &RadialChart, a: &Rational, r2: &RadialChart, b: &Rational) -> Rational {
    let mut pts: Vec<BasePoint> = transported_breakpoints(r1.iso(), r1.offset());
    pts.extend(transported_breakpoints(r2.iso(), r2.offset()));
    let target = r1.iso().target();
    pts.extend((0..target.vertex_count()).map(BasePoint::Vertex));
    pts.sort();
    pts.dedup();
    pts.iter()
        .map(|w| r2.threshold(w, b) - r1.threshold(w, a))
        .min()
        .expect("a base has a vertex")
}

/// Decides `φ` and `ψ` `k`-interlaced:
/// `φ(Y×(2i-1,∞]) ⊇ ψ(Z×[2i,∞])` for `i ≤ k` and
/// `ψ(Z×(2i,∞]) ⊇ φ(Y×[2i+1,∞])` for `i < k`.
pub fn is_k_interlaced(phi: &ConeChart, psi: &ConeChart, k: u32) -> Result<bool, RegionError> {
    let mut prover = Prover::new();
    is_k_interlaced_with(&mut prover, phi, psi, k)
}

pub fn is_k_interlaced_with(
    prover: &mut Prover,
    phi: &ConeChart,
    psi: &ConeChart,
    k: u32,
) -> Result<bool, RegionError> {
    if phi.ambient() != psi.ambient() {
        return Err(RegionError::AmbientMismatch);
    }
    for (outer, inner) in interlacing_conditions(phi, psi, k) {
        match prover.contains(&outer, &inner) {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => return Err(RegionError::Undecided("in the interlacing conditions")),
        }
    }
    Ok(true)
}

/// The containments defining `k`-interlacing, in order of increasing level.
pub fn interlacing_conditions(phi: &ConeChart, psi: &ConeChart, k: u32) -> Vec<(RegionExpr, RegionExpr)> {
    let lv = |n: u32| ExtendedLevel::int(i64::from(n));
    let mut out = Vec::new();
    for i in 1..=k {
        out.push((
            RegionExpr::open(phi, lv(2 * i - 1)),
            RegionExpr::closed(psi, lv(2 * i)),
        ));
        if i < k {
            out.push((
                RegionExpr::open(psi, lv(2 * i)),
                RegionExpr::closed(phi, lv(2 * i + 1)),
            ));
        }
    }
    out
}

/// Supremum of `r` with `outer(Y × (a + r, ∞]) ⊇ inner(Z × [b, ∞])`, for
/// directly constructed charts. May be non-positive.
pub fn sup_outer_shift(outer: &ConeChart, a: &Rational, inner: &ConeChart, b: &Rational) -> Option<Rational> {
    match (outer.kind(), inner.kind()) {
        (ChartKind::Radial(r1), ChartKind::Radial(r2)) if r1.pole() == r2.pole() => {
            Some(radial_min_gap(r1, a, r2, b))
        }
        (ChartKind::Planar(p1), ChartKind::Planar(p2)) if p1.view() == p2.view() => {
            let w2 = p2.width(&ExtendedLevel::Finite(b.clone()));
            let mut best: Option<Rational> = None;
            for v in p2.cycle().shape().vertices() {
                let corner = p2.center() + &v.scale(&w2);
                let r = match p1.level_of_plane(&corner) {
                    None => return Some(-a.clone()),
                    Some(ExtendedLevel::Infinity) => continue,
                    Some(ExtendedLevel::Finite(t)) => t - a,
                };
                best = Some(match best {
                    Some(x) if x <= r => x,
                    _ => r,
                });
            }
            best.or(Some(b.clone()))
        }
        _ => None,
    }
}

/// Supremum of `r` with `outer(Y × (a, ∞]) ⊇ inner(Z × [b - r, ∞])`, for
/// directly constructed charts, capped at `b`.
pub fn sup_inner_shift(outer: &ConeChart, a: &Rational, inner: &ConeChart, b: &Rational) -> Option<Rational> {
    match (outer.kind(), inner.kind()) {
        (ChartKind::Radial(r1), ChartKind::Radial(r2)) if r1.pole() == r2.pole() => {
            let gap = radial_min_gap(r1, a, r2, b);
            Some(if gap > *b { b.clone() } else { gap })
        }
        (ChartKind::Planar(p1), ChartKind::Planar(p2)) if p1.view() == p2.view() => {
            let s = planar_fit_width(p1, &p1.width(&ExtendedLevel::Finite(a.clone())), p2);
            if s >= p2.max_width() {
                return Some(b.clone());
            }
            if !s.is_positive() {
                return Some(-b.clone());
            }
            Some(b - p2.level_at_width(&s))
        }
        _ => None,
    }
}

/// Supremum of widths `W` with `c₂ + W·P₂` inside the open polygon
/// `c₁ + w·P₁`.
fn planar_fit_width(p1: &PlanarChart, w: &Rational, p2: &PlanarChart) -> Rational {
    let delta: Vec2 = p2.center() - p1.center();
    let mut best: Option<Rational> = None;
    for (n, h) in p1.cycle().shape().normals() {
        let room = w * h - n.dot(&delta);
        for k in p2.cycle().shape().vertices() {
            let reach = n.dot(k);
            if reach.is_positive() {
                let s = &room / &reach;
                best = Some(match best {
                    Some(x) if x <= s => x,
                    _ => s,
                });
            } else if !room.is_positive() {
                return Rational::zero();
            }
        }
    }
    best.unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{AmbientSpace, CycleShape};
    use crate::base::{BaseFunction, BaseGraph, BaseIso};
    use crate::chart::Pole;
    use crate::num::{q, qi};
    use crate::pl::PlHomeo;

    fn cone3() -> AmbientSpace {
        AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(3).unwrap(),
        }
    }

    fn offset_chart(amb: &AmbientSpace, d: [Rational; 3]) -> ConeChart {
        let base = amb.base().unwrap();
        let f = BaseFunction::from_vertices(base, d.to_vec()).unwrap();
        ConeChart::radial(amb, BaseIso::identity(base), f, Pole::Apex).unwrap()
    }

    fn f2_pair() -> (ConeChart, ConeChart) {
        let amb = AmbientSpace::open_square(qi(8)).unwrap();
        let prof = PlHomeo::new(
            alloc::vec![(qi(0), q(1, 2)), (qi(1), qi(1)), (qi(2), qi(2))],
            true,
            true,
        )
        .unwrap();
        let mk =
            |c: Vec2| ConeChart::planar(&amb, CycleShape::square(), c, qi(2), prof.clone(), None).unwrap();
        (mk(Vec2::zero()), mk(Vec2::new(q(1, 8), qi(0))))
    }

    #[test]
    fn identity_pair_is_interlaced_at_every_k() {
        let amb = cone3();
        let phi = ConeChart::identity(&amb).unwrap();
        for k in 2..6 {
            assert_eq!(is_k_interlaced(&phi, &phi, k), Ok(true));
        }
    }

    #[test]
    fn offset_fixture_is_interlaced() {
        let amb = cone3();
        let phi = ConeChart::identity(&amb).unwrap();
        let psi = offset_chart(&amb, [q(1, 2), q(-1, 2), qi(0)]);
        assert_eq!(is_k_interlaced(&phi, &psi, 2), Ok(true));
        let far = offset_chart(&amb, [q(3, 2), qi(0), qi(0)]);
        assert_eq!(is_k_interlaced(&phi, &far, 2), Ok(false));
        assert_eq!(sup_inner_shift(&phi, &qi(1), &psi, &qi(2)), Some(q(1, 2)));
        assert_eq!(sup_outer_shift(&phi, &qi(3), &psi, &qi(4)), Some(q(1, 2)));
    }

    #[test]
    fn planar_fixture_is_interlaced() {
        let (phi, psi) = f2_pair();
        assert_eq!(is_k_interlaced(&phi, &psi, 2), Ok(true));
        assert_eq!(is_k_interlaced(&psi, &phi, 2), Ok(true));
        assert_eq!(is_k_interlaced(&phi, &phi, 3), Ok(true));
    }

    #[test]
    fn ambient_mismatch() {
        let (phi, _) = f2_pair();
        let other = ConeChart::identity(&cone3()).unwrap();
        assert_eq!(
            is_k_interlaced(&phi, &other, 2),
            Err(RegionError::AmbientMismatch)
        );
    }

    #[test]
    fn planar_slack_sups() {
        let (phi, psi) = f2_pair();
        // Corners of ψ[4] sit at max-norm 1/2 + 1/8 from φ's center: level 16/5.
        assert_eq!(sup_outer_shift(&phi, &qi(3), &psi, &qi(4)), Some(q(1, 5)));
        // ψ squares fit in φ(1) up to half-width 15/8, i.e. level 16/15.
        assert_eq!(sup_inner_shift(&phi, &qi(1), &psi, &qi(2)), Some(q(14, 15)));
    }
}
