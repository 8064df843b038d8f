//! Generators for interlaced chart pairs: level offsets of a radial chart
//! and recentered copies of a planar chart.
//!
//! [`recenter_chart`] stands in for the step that produces a small ambient
//! homeomorphism moving a vertex onto a nearby point. On the planar models
//! the recentered chart is written down directly.

use alloc::vec;

use num_traits::{One, Zero};

use crate::ambient::AmbientPoint;
use crate::base::BaseFunction;
use crate::chart::{ChartError, ChartKind, ConeChart};
use crate::num::{half, qi, ExtendedLevel, Rational};
use crate::pl::PlHomeo;
use crate::region::{is_k_interlaced, RegionError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PairError {
    #[error("offset must satisfy |d| < 1 everywhere")]
    OffsetTooLarge,
    #[error("operation needs a radial chart")]
    NotRadial,
    #[error("operation needs a planar chart")]
    NotPlanar,
    #[error("target point is not deep enough in the chart to recenter")]
    TargetTooShallow,
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// `ψ(z, t) = φ(z, t + d(z))`. Any `|d| < 1` keeps `ψ` 2-interlaced with `φ`.
pub fn make_offset_chart(phi: &ConeChart, d: &BaseFunction) -> Result<ConeChart, PairError> {
    let r = phi.as_radial().ok_or(PairError::NotRadial)?;
    if d.max_abs() >= Rational::one() {
        return Err(PairError::OffsetTooLarge);
    }
    if d.vertex_values().len() != phi.base().vertex_count()
        || d.edge_knots().len() != phi.base().edges().len()
    {
        return Err(ChartError::OffsetMismatch.into());
    }
    if d.max_abs().is_zero() {
        return Ok(phi.clone());
    }
    let offset = r.offset().add(d, phi.base());
    Ok(ConeChart::radial(
        phi.ambient(),
        r.iso().clone(),
        offset,
        r.pole(),
    )?)
}

/// A planar chart with vertex `q`, 2-interlaced with `φ`, whose level sets
/// are copies of `φ`'s polygon about `q`.
///
/// The plain translate of `φ` is used when it works. Otherwise the level
/// widths are chosen from the gauge distances `δ⁺ = |q - c|` and
/// `δ⁻ = |c - q|` and the widths `R_t` of `φ`: width `w₂` at level 2
/// strictly between `δ⁻ + R₃` and `R₁ - δ⁺`, and width `(R₃ - δ⁺)/2` at
/// level 4. That needs `q ∈ φ(Y × (4, ∞])` and `δ⁺ + δ⁻ < R₁ - R₃`.
pub fn recenter_chart(phi: &ConeChart, q: &AmbientPoint) -> Result<ConeChart, PairError> {
    let p = match phi.kind() {
        ChartKind::Planar(p) => p,
        _ => return Err(PairError::NotPlanar),
    };
    if *q == phi.vertex() {
        return Ok(phi.clone());
    }
    if !phi.region_contains(&ExtendedLevel::int(4), false, q) {
        return Err(PairError::TargetTooShallow);
    }
    let ambient = phi.ambient();
    let qv = ambient.to_view(p.view(), q).ok_or(PairError::TargetTooShallow)?;

    if let Ok(psi) = ConeChart::planar(
        ambient,
        p.cycle().clone(),
        qv.clone(),
        p.scale().clone(),
        p.profile().clone(),
        p.view(),
    ) {
        if is_k_interlaced(phi, &psi, 2)? {
            return Ok(psi);
        }
    }

    let shape = p.cycle().shape();
    let out = shape.gauge(&(&qv - p.center()));
    let back = shape.gauge(&(p.center() - &qv));
    let r1 = p.width(&ExtendedLevel::int(1));
    let r3 = p.width(&ExtendedLevel::int(3));
    let lo = &back + &r3;
    let hi = &r1 - &out;
    if lo >= hi {
        return Err(PairError::TargetTooShallow);
    }
    let w2 = half(&(lo + hi));
    let w4 = half(&(&r3 - &out));
    let w0 = p.max_width() - &out;
    let profile = PlHomeo::new(
        vec![
            (qi(0), Rational::one() / w0),
            (qi(2), Rational::one() / w2),
            (qi(4), Rational::one() / w4),
        ],
        true,
        true,
    )
    .map_err(ChartError::Pl)?;
    let psi = ConeChart::planar(ambient, p.cycle().clone(), qv, qi(1), profile, p.view())?;
    if !is_k_interlaced(phi, &psi, 2)? {
        return Err(PairError::TargetTooShallow);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{AmbientSpace, CycleShape};
    use crate::base::BaseGraph;
    use crate::geom::Vec2;
    use crate::num::q;

    fn square_phi(profile: PlHomeo, scale: Rational) -> ConeChart {
        let amb = AmbientSpace::open_square(qi(8)).unwrap();
        ConeChart::planar(&amb, CycleShape::square(), Vec2::zero(), scale, profile, None).unwrap()
    }

    fn f2_profile() -> PlHomeo {
        PlHomeo::new(vec![(qi(0), q(1, 2)), (qi(1), qi(1)), (qi(2), qi(2))], true, true).unwrap()
    }

    #[test]
    fn offsets() {
        let amb = AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(3).unwrap(),
        };
        let phi = ConeChart::identity(&amb).unwrap();
        let base = phi.base().clone();
        let zero = BaseFunction::constant(&base, qi(0));
        assert_eq!(make_offset_chart(&phi, &zero).unwrap(), phi);
        let d = BaseFunction::constant(&base, q(1, 2));
        let psi = make_offset_chart(&phi, &d).unwrap();
        assert_eq!(is_k_interlaced(&phi, &psi, 2), Ok(true));
        let big = BaseFunction::constant(&base, q(3, 2));
        assert_eq!(make_offset_chart(&phi, &big), Err(PairError::OffsetTooLarge));
    }

    #[test]
    fn recentering_the_planar_fixture() {
        let phi = square_phi(f2_profile(), qi(2));
        assert_eq!(recenter_chart(&phi, &phi.vertex()).unwrap(), phi);
        let psi = recenter_chart(&phi, &AmbientPoint::plane(q(1, 8), qi(0))).unwrap();
        let pp = psi.as_planar().unwrap();
        assert_eq!(pp.center(), &Vec2::new(q(1, 8), qi(0)));
        assert_eq!(pp.scale(), &qi(2));
        assert!(pp.profile().same_map(&f2_profile()));
        assert_eq!(
            recenter_chart(&phi, &AmbientPoint::plane(qi(1), qi(0))),
            Err(PairError::TargetTooShallow)
        );
    }

    #[test]
    fn recentering_falls_back_to_custom_widths() {
        // The translate fails φ(3) ⊇ ψ[4]: ψ[4] reaches 2/5 + 1/2 > 2/3 = R₃.
        let phi = square_phi(f2_profile(), qi(2));
        let target = AmbientPoint::plane(q(2, 5), qi(0));
        assert!(phi.region_contains(&ExtendedLevel::int(4), false, &target));
        let psi = recenter_chart(&phi, &target).unwrap();
        assert_eq!(psi.as_planar().unwrap().scale(), &qi(1));
        assert_eq!(psi.vertex(), target);
        assert_eq!(is_k_interlaced(&phi, &psi, 2), Ok(true));
    }
}
