//! Raising the interlacing order of a chart pair, and the limit chart.
//!
//! [`promote`] turns a `k`-interlaced pair `(φ, ψ)` into a `(k+1)`-interlaced
//! pair `(φ', ψ)` with `φ' = φ` on `Y × (0, 2k-1]`, where
//! `φ' = γ ∘ β ∘ α ∘ φ` for radial maps `α`, `γ` of `φ` and `β` of `ψ`.
//!
//! Iterating gives the tower `φ₂ = φ`, `φᵢ₊₁ = promote(φᵢ, ψ, i)`. The limit
//! chart `χ` equals `φᵢ` on `Y × (0, 2i-1]` and has vertex `q`, the vertex
//! of `ψ`. [`AlternateSwap`] is the homeomorphism `χ ∘ φ⁻¹` on `U`,
//! the identity elsewhere.

use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::Signed;

use crate::ambient::AmbientPoint;
use crate::base::BasePoint;
use crate::chart::{ChartError, ChartKind, ChartPreimage, ConeChart, PromotedChart, RadialMap};
use crate::num::{ceil_int, floor_int, qi, ExtendedLevel, Rational};
use crate::pl::{make_promotion_triple, PlError};
use crate::region::{is_k_interlaced_with, sup_outer_shift, Prover, RegionError, RegionExpr};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PromotionError {
    #[error("promotion index k must be at least 2")]
    InvalidK,
    #[error("charts are not {0}-interlaced")]
    NotKInterlaced(u32),
    #[error("no admissible slack r was found")]
    NoSlack,
    #[error("tower index {0} exceeds the materialization bound")]
    BoundExceeded(usize),
    #[error("point is not in the chart image")]
    OutsideChart,
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Levels `2k-3 + j` for `j = 0, 1, …`, written `L₁, L₂, …` from `L₁ = 2k-3`.
fn anchor(k: u32, n: i64) -> Rational {
    qi(n + 2 * i64::from(k) - 4)
}

/// Smallest slack tried is `2^-SLACK_EXPONENT_BOUND`.
pub const SLACK_EXPONENT_BOUND: u32 = 64;

/// Slack `r` with `φ(L₁+r) ⊇ ψ[L₂]`, `ψ(L₂+r) ⊇ φ[L₃]`, `φ(L₃+r) ⊇ ψ[L₄]`.
///
/// For directly constructed charts this is the largest power of two at most
/// half the exact supremum, capped at 1; otherwise the largest `2⁻ʲ`, `j ≤ 64`, that the prover accepts.
pub fn promotion_slack(
    prover: &mut Prover,
    phi: &ConeChart,
    psi: &ConeChart,
    k: u32,
) -> Result<Rational, PromotionError> {
    let l = |n| anchor(k, n);
    let sups = [
        sup_outer_shift(phi, &l(1), psi, &l(2)),
        sup_outer_shift(psi, &l(2), phi, &l(3)),
        sup_outer_shift(phi, &l(3), psi, &l(4)),
    ];
    let r = if sups.iter().all(Option::is_some) {
        let min = sups.into_iter().flatten().min().expect("three values");
        if !min.is_positive() {
            return Err(PromotionError::NoSlack);
        }
        // Largest power of two at most half the supremum: dyadic slacks keep
        // the denominators of tower points small.
        let half = min / qi(2);
        let mut r = qi(1);
        while r > half {
            r /= qi(2);
        }
        r
    } else {
        // Admissible slacks are closed downward: bisect on the exponent.
        let r = |j: u32| Rational::new(1.into(), num_bigint::BigInt::from(1) << j);
        let (mut lo, mut hi) = (0u32, SLACK_EXPONENT_BOUND);
        if slack_holds(prover, phi, psi, k, &r(hi)) != Some(true) {
            return Err(PromotionError::NoSlack);
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if slack_holds(prover, phi, psi, k, &r(mid)) == Some(true) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        r(hi)
    };
    if slack_holds(prover, phi, psi, k, &r) != Some(true) {
        return Err(PromotionError::NoSlack);
    }
    Ok(r)
}

fn slack_holds(prover: &mut Prover, phi: &ConeChart, psi: &ConeChart, k: u32, r: &Rational) -> Option<bool> {
    let l = |n| anchor(k, n);
    let fin = ExtendedLevel::Finite;
    let checks = [
        (
            RegionExpr::open(phi, fin(l(1) + r)),
            RegionExpr::closed(psi, fin(l(2))),
        ),
        (
            RegionExpr::open(psi, fin(l(2) + r)),
            RegionExpr::closed(phi, fin(l(3))),
        ),
        (
            RegionExpr::open(phi, fin(l(3) + r)),
            RegionExpr::closed(psi, fin(l(4))),
        ),
    ];
    for (outer, inner) in &checks {
        if !prover.contains(outer, inner)? {
            return Some(false);
        }
    }
    Some(true)
}

/// `φ' = γ ∘ β ∘ α ∘ φ`, equal to `φ` on `Y × (0, 2k-1]` and
/// `(k+1)`-interlaced with `ψ`.
pub fn promote(phi: &ConeChart, psi: &ConeChart, k: u32) -> Result<ConeChart, PromotionError> {
    promote_with(&mut Prover::new(), phi, psi, k)
}

pub fn promote_with(
    prover: &mut Prover,
    phi: &ConeChart,
    psi: &ConeChart,
    k: u32,
) -> Result<ConeChart, PromotionError> {
    if k < 2 {
        return Err(PromotionError::InvalidK);
    }
    if !is_k_interlaced_with(prover, phi, psi, k)? {
        return Err(PromotionError::NotKInterlaced(k));
    }
    let r = promotion_slack(prover, phi, psi, k)?;
    let (lambda, mu, nu) = make_promotion_triple(&r, k)?;
    let promoted = ConeChart::promoted(PromotedChart {
        inner: phi.clone(),
        partner: psi.clone(),
        k,
        r,
        alpha: RadialMap::new(phi.clone(), lambda)?,
        beta: RadialMap::new(psi.clone(), mu)?,
        gamma: RadialMap::new(phi.clone(), nu)?,
    });
    if !is_k_interlaced_with(prover, &promoted, psi, k + 1)? {
        return Err(PromotionError::NotKInterlaced(k + 1));
    }
    Ok(promoted)
}

/// Default bound on the tower index.
pub const TOWER_BOUND: usize = 64;

/// The tower `φ₂ = φ, φ₃, …`, grown on demand.
///
/// Interior mutability is confined to this value; it is not `Sync`.
#[derive(Debug)]
pub struct ChartTower {
    psi: ConeChart,
    charts: RefCell<Vec<ConeChart>>,
    prover: RefCell<Prover>,
    bound: usize,
    truncate_at: Option<usize>,
}

impl ChartTower {
    pub fn new(phi: &ConeChart, psi: &ConeChart) -> Result<Self, PromotionError> {
        let mut prover = Prover::new();
        if !is_k_interlaced_with(&mut prover, phi, psi, 2)? {
            return Err(PromotionError::NotKInterlaced(2));
        }
        Ok(ChartTower {
            psi: psi.clone(),
            charts: RefCell::new(alloc::vec![phi.clone()]),
            prover: RefCell::new(prover),
            bound: TOWER_BOUND,
            truncate_at: None,
        })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    /// A defective tower that stops growing at index `i` and reuses `φᵢ`
    /// beyond it.
    pub fn truncated(mut self, i: usize) -> Self {
        self.truncate_at = Some(i.max(2));
        self
    }

    pub fn phi(&self) -> ConeChart {
        self.charts.borrow()[0].clone()
    }

    pub fn psi(&self) -> &ConeChart {
        &self.psi
    }

    /// Largest index built so far.
    pub fn materialized(&self) -> usize {
        self.charts.borrow().len() + 1
    }

    /// `φᵢ` for `i ≥ 2`.
    pub fn chart(&self, i: usize) -> Result<ConeChart, PromotionError> {
        let i = i.max(2);
        if i > self.bound {
            return Err(PromotionError::BoundExceeded(i));
        }
        let i = match self.truncate_at {
            Some(t) if i > t => t,
            _ => i,
        };
        loop {
            let have = self.materialized();
            if have >= i {
                return Ok(self.charts.borrow()[i - 2].clone());
            }
            let top = self.charts.borrow()[have - 2].clone();
            let k = u32::try_from(have).expect("small index");
            let next = promote_with(&mut self.prover.borrow_mut(), &top, &self.psi, k)?;
            self.charts.borrow_mut().push(next);
        }
    }
}

/// Least `i ≥ 2` with `2i - 1 > t`.
pub fn tower_index(t: &Rational) -> usize {
    let i = floor_int(&((t + qi(1)) / qi(2))) + 1;
    usize::try_from(i.max(2)).expect("positive index")
}

/// The limit of a chart tower: a chart for `U` with vertex `q`.
#[derive(Debug)]
pub struct LimitChart {
    tower: ChartTower,
    q: AmbientPoint,
}

impl LimitChart {
    pub fn new(phi: &ConeChart, psi: &ConeChart) -> Result<Self, PromotionError> {
        Ok(LimitChart::from_tower(ChartTower::new(phi, psi)?))
    }

    pub fn from_tower(tower: ChartTower) -> Self {
        let q = tower.psi().vertex();
        LimitChart { tower, q }
    }

    pub fn tower(&self) -> &ChartTower {
        &self.tower
    }

    pub fn vertex(&self) -> &AmbientPoint {
        &self.q
    }

    /// `χ(y, t) = φᵢ(y, t)` for the least `i` with `2i - 1 > t`.
    pub fn eval(&self, y: &BasePoint, t: &ExtendedLevel) -> Result<AmbientPoint, PromotionError> {
        match t {
            ExtendedLevel::Infinity => Ok(self.q.clone()),
            ExtendedLevel::Finite(v) => self.eval_at_index(tower_index(v), y, v),
        }
    }

    /// `φᵢ(y, t)` for a chosen tower index.
    pub fn eval_at_index(
        &self,
        i: usize,
        y: &BasePoint,
        t: &Rational,
    ) -> Result<AmbientPoint, PromotionError> {
        Ok(self.tower.chart(i)?.eval(y, &ExtendedLevel::Finite(t.clone()))?)
    }

    /// `χ⁻¹(x)`. A point of `U` at `ψ`-level `s` is reached by `φᵢ` on
    /// levels below `2i - 1` once `2i - 2 ≥ s`.
    pub fn invert(&self, x: &AmbientPoint) -> Result<ChartPreimage, PromotionError> {
        if *x == self.q {
            return Ok(ChartPreimage::Vertex);
        }
        let phi = self.tower.phi();
        if !phi.image_contains(x) {
            return Ok(ChartPreimage::Outside);
        }
        let mut i = match self.tower.psi().invert(x) {
            ChartPreimage::Interior(_, s) => {
                usize::try_from((ceil_int(&(s / qi(2))) + 1).max(2)).expect("positive index")
            }
            _ => 2,
        };
        loop {
            match self.tower.chart(i)?.invert(x) {
                ChartPreimage::Interior(y, t) if t < qi(2 * i64::try_from(i).expect("small") - 1) => {
                    return Ok(ChartPreimage::Interior(y, t));
                }
                ChartPreimage::Outside => return Err(PromotionError::OutsideChart),
                _ => i += 1,
            }
        }
    }
}

/// `h = χ ∘ φ⁻¹` on `U` and the identity off `U`: a homeomorphism taking
/// `p` to `q` that is the identity on `X - φ(Y × [3, ∞])`.
#[derive(Debug)]
pub struct AlternateSwap {
    chi: LimitChart,
    phi: ConeChart,
    p: AmbientPoint,
}

impl AlternateSwap {
    pub fn new(phi: &ConeChart, psi: &ConeChart) -> Result<Self, PromotionError> {
        Ok(AlternateSwap::from_limit(LimitChart::new(phi, psi)?))
    }

    pub fn from_limit(chi: LimitChart) -> Self {
        let phi = chi.tower().phi();
        AlternateSwap {
            p: phi.vertex(),
            phi,
            chi,
        }
    }

    pub fn limit(&self) -> &LimitChart {
        &self.chi
    }

    pub fn phi(&self) -> &ConeChart {
        &self.phi
    }

    pub fn psi(&self) -> &ConeChart {
        self.chi.tower().psi()
    }

    pub fn eval(&self, x: &AmbientPoint) -> Result<AmbientPoint, PromotionError> {
        match self.phi.invert(x) {
            ChartPreimage::Outside => Ok(x.clone()),
            ChartPreimage::Vertex => Ok(self.chi.vertex().clone()),
            ChartPreimage::Interior(y, t) => {
                if t <= qi(3) {
                    return Ok(x.clone());
                }
                self.chi.eval(&y, &ExtendedLevel::Finite(t))
            }
        }
    }

    pub fn eval_inverse(&self, x: &AmbientPoint) -> Result<AmbientPoint, PromotionError> {
        match self.chi.invert(x)? {
            ChartPreimage::Outside => Ok(x.clone()),
            ChartPreimage::Vertex => Ok(self.p.clone()),
            ChartPreimage::Interior(y, t) => Ok(self.phi.at(&y, &t)),
        }
    }

    /// Whether `x` lies in the declared support `U`.
    pub fn in_support(&self, x: &AmbientPoint) -> bool {
        self.phi.image_contains(x)
    }
}

/// Whether a chart was produced by promotion.
pub fn is_promoted(c: &ConeChart) -> bool {
    matches!(c.kind(), ChartKind::Promoted(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{AmbientSpace, CycleShape};
    use crate::base::BaseGraph;
    use crate::geom::Vec2;
    use crate::num::q;
    use crate::pl::PlHomeo;
    use crate::region::is_k_interlaced;

    fn f0() -> ConeChart {
        let amb = AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(3).unwrap(),
        };
        ConeChart::identity(&amb).unwrap()
    }

    fn f2() -> (ConeChart, ConeChart) {
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
    fn promote_identity_pair() {
        let phi = f0();
        let p2 = promote(&phi, &phi, 2).unwrap();
        assert_eq!(is_k_interlaced(&p2, &phi, 3), Ok(true));
        for y in phi.base().sample_points(1) {
            for n in 1..=6 {
                let t = q(n, 2);
                assert_eq!(p2.at(&y, &t), phi.at(&y, &t));
            }
        }
        assert_eq!(promote(&phi, &phi, 1), Err(PromotionError::InvalidK));
    }

    #[test]
    fn promote_rejects_uninterlaced() {
        let (phi, psi) = f2();
        let far = ConeChart::planar(
            phi.ambient(),
            CycleShape::square(),
            Vec2::new(qi(3), qi(0)),
            qi(1),
            PlHomeo::new(alloc::vec![(qi(0), qi(1)), (qi(1), qi(2))], true, true).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(promote(&phi, &far, 2), Err(PromotionError::NotKInterlaced(2)));
        assert!(promote(&phi, &psi, 2).is_ok());
    }

    #[test]
    fn tower_index_rule() {
        assert_eq!(tower_index(&qi(10)), 6);
        assert_eq!(tower_index(&qi(3)), 3);
        assert_eq!(tower_index(&q(5, 2)), 2);
        assert_eq!(tower_index(&q(1, 2)), 2);
    }

    #[test]
    fn planar_limit_chart() {
        let (phi, psi) = f2();
        let chi = LimitChart::new(&phi, &psi).unwrap();
        let y = BasePoint::Vertex(0);
        assert_eq!(chi.eval(&y, &ExtendedLevel::Infinity).unwrap(), psi.vertex());
        assert_eq!(chi.eval(&y, &ExtendedLevel::int(3)).unwrap(), phi.at(&y, &qi(3)));
        let x = chi.eval(&y, &ExtendedLevel::int(9)).unwrap();
        assert_eq!(chi.tower().materialized(), 6);
        assert_eq!(chi.invert(&x).unwrap(), ChartPreimage::Interior(y.clone(), qi(9)));
        assert!(psi.region_contains(&ExtendedLevel::int(6), false, &x));
    }

    #[test]
    fn alternate_swap_moves_the_vertex() {
        let (phi, psi) = f2();
        let h = AlternateSwap::new(&phi, &psi).unwrap();
        assert_eq!(h.eval(&phi.vertex()).unwrap(), psi.vertex());
        assert_eq!(h.eval_inverse(&psi.vertex()).unwrap(), phi.vertex());
        let y = BasePoint::edge(1, q(1, 3));
        let low = phi.at(&y, &q(5, 2));
        assert_eq!(h.eval(&low).unwrap(), low);
        let deep = phi.at(&y, &q(13, 2));
        let image = h.eval(&deep).unwrap();
        assert_eq!(h.eval_inverse(&image).unwrap(), deep);
    }
}
