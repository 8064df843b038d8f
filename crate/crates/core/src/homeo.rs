//! Homeomorphisms of the ambient models assembled from chart maps.
//!
//! Every [`Homeo`] evaluates exactly in both directions and declares a
//! support region: a point outside it must be fixed.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::ambient::AmbientPoint;
use crate::base::BasePoint;
use crate::chart::{ChartPreimage, ConeChart, RadialMap};
use crate::num::{q, qi, Rational};
use crate::pl::PlHomeo;
use crate::promotion::{AlternateSwap, PromotionError};
use crate::swindle::{Swindle, SwindleError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomeoError {
    #[error(transparent)]
    Swindle(#[from] SwindleError),
    #[error(transparent)]
    Promotion(#[from] PromotionError),
}

/// Where a homeomorphism came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Built only from the given charts.
    Direct,
    /// Uses a recentered chart in place of a small ambient homeomorphism
    /// moving a vertex.
    ConstructiveSurrogate,
}

impl core::fmt::Display for Provenance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Provenance::Direct => "direct",
            Provenance::ConstructiveSurrogate => "constructive surrogate",
        })
    }
}

/// A level reparameterization along one ray of a chart, tapered to the
/// identity on rays at base distance `1/2` or more.
///
/// On the ray at distance `d < 1/2` the level map has knots
/// `(0,0)` (open), `(m,m)`, `(t₀, τ)`, `(M,M)` and a slope-one tail, where
/// `τ = (1-2d)·target + 2d·t₀`, `m = min(t₀, target)/2`,
/// `M = max(t₀, target) + 1`.
#[derive(Clone, Debug)]
pub struct Slide {
    chart: ConeChart,
    ray: BasePoint,
    from: Rational,
    to: Rational,
}

impl Slide {
    pub(crate) fn new(chart: ConeChart, ray: BasePoint, from: Rational, to: Rational) -> Self {
        Slide { chart, ray, from, to }
    }

    pub fn chart(&self) -> &ConeChart {
        &self.chart
    }

    /// The level map on the ray through `y`, `None` where the slide is the
    /// identity.
    pub fn level_map(&self, y: &BasePoint) -> Option<PlHomeo> {
        let d = self.chart.base().distance(y, &self.ray)?;
        if d >= q(1, 2) {
            return None;
        }
        let w = qi(1) - qi(2) * &d;
        let tau = &w * &self.to + (qi(1) - &w) * &self.from;
        if tau == self.from {
            return None;
        }
        let (lo, hi) = if self.from < self.to {
            (&self.from, &self.to)
        } else {
            (&self.to, &self.from)
        };
        let m = lo / qi(2);
        let big = hi + qi(1);
        let knots = alloc::vec![
            (qi(0), qi(0)),
            (m.clone(), m),
            (self.from.clone(), tau),
            (big.clone(), big),
        ];
        Some(PlHomeo::new(knots, true, true).expect("increasing knots"))
    }

    fn apply(&self, x: &AmbientPoint, inverse: bool) -> AmbientPoint {
        match self.chart.invert(x) {
            ChartPreimage::Interior(y, t) => match self.level_map(&y) {
                None => x.clone(),
                Some(k) => {
                    let k = if inverse { k.inverse() } else { k };
                    let s = k.eval_rational(&t).expect("levels of (0, ∞)");
                    self.chart.at(&y, &s)
                }
            },
            _ => x.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Homeo {
    Identity,
    Slide(Slide),
    Radial(RadialMap),
    /// The vertex swap of a 2-interlaced pair; the flag marks a recentered
    /// second chart.
    Swap(Rc<Swindle>, bool),
    Alternate(Rc<AlternateSwap>),
    Inverse(Box<Homeo>),
    /// Composite applying the first element first.
    Chain(Vec<Homeo>),
    /// A map with an explicitly declared support (the union of the chart
    /// images).
    Declared(Box<Homeo>, Vec<ConeChart>),
}

impl Homeo {
    pub fn inverse(self) -> Homeo {
        match self {
            Homeo::Identity => Homeo::Identity,
            Homeo::Inverse(h) => *h,
            h => Homeo::Inverse(Box::new(h)),
        }
    }

    /// `second ∘ first`, flattening nested chains and dropping identities.
    pub fn then(self, second: Homeo) -> Homeo {
        let mut parts = Vec::new();
        for h in [self, second] {
            match h {
                Homeo::Identity => {}
                Homeo::Chain(v) => parts.extend(v),
                h => parts.push(h),
            }
        }
        match parts.len() {
            0 => Homeo::Identity,
            1 => parts.pop().expect("one part"),
            _ => Homeo::Chain(parts),
        }
    }

    pub fn eval(&self, x: &AmbientPoint) -> Result<AmbientPoint, HomeoError> {
        self.apply(x, false)
    }

    pub fn eval_inverse(&self, x: &AmbientPoint) -> Result<AmbientPoint, HomeoError> {
        self.apply(x, true)
    }

    fn apply(&self, x: &AmbientPoint, inverse: bool) -> Result<AmbientPoint, HomeoError> {
        Ok(match self {
            Homeo::Identity => x.clone(),
            Homeo::Slide(s) => s.apply(x, inverse),
            Homeo::Radial(m) => {
                if inverse {
                    m.apply_inverse(x)
                } else {
                    m.apply(x)
                }
            }
            Homeo::Swap(h, _) => {
                if inverse {
                    h.eval_inverse(x)?
                } else {
                    h.eval(x)?
                }
            }
            Homeo::Alternate(h) => {
                if inverse {
                    h.eval_inverse(x)?
                } else {
                    h.eval(x)?
                }
            }
            Homeo::Inverse(h) => h.apply(x, !inverse)?,
            Homeo::Chain(parts) => {
                let mut y = x.clone();
                if inverse {
                    for h in parts.iter().rev() {
                        y = h.apply(&y, true)?;
                    }
                } else {
                    for h in parts {
                        y = h.apply(&y, false)?;
                    }
                }
                y
            }
            Homeo::Declared(h, _) => h.apply(x, inverse)?,
        })
    }

    /// Whether `x` lies in the declared support.
    pub fn in_support(&self, x: &AmbientPoint) -> bool {
        match self {
            Homeo::Identity => false,
            Homeo::Slide(s) => s.chart.image_contains(x),
            Homeo::Radial(m) => m.chart().image_contains(x),
            Homeo::Swap(h, _) => h.in_support(x),
            Homeo::Alternate(h) => h.in_support(x),
            Homeo::Inverse(h) => h.in_support(x),
            Homeo::Chain(parts) => parts.iter().any(|h| h.in_support(x)),
            Homeo::Declared(_, charts) => charts.iter().any(|c| c.image_contains(x)),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Homeo::Swap(_, true) => Provenance::ConstructiveSurrogate,
            Homeo::Inverse(h) | Homeo::Declared(h, _) => h.provenance(),
            Homeo::Chain(parts) => parts
                .iter()
                .map(Homeo::provenance)
                .max()
                .unwrap_or(Provenance::Direct),
            _ => Provenance::Direct,
        }
    }

    /// Number of elementary maps.
    pub fn len(&self) -> usize {
        match self {
            Homeo::Identity => 0,
            Homeo::Inverse(h) | Homeo::Declared(h, _) => h.len(),
            Homeo::Chain(parts) => parts.iter().map(Homeo::len).sum(),
            _ => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
