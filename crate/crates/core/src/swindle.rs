//! The vertex swap for a 2-interlaced pair of cone charts.
//!
//! Given charts `φ` on `U` with vertex `p` and `ψ` on `V` with vertex `q`,
//! [`Swindle`] is a homeomorphism of the ambient space taking `p` to `q`,
//! supported in `U ∪ V`. It is the identity on
//! `(X - U) ∪ φ(Y × (0, 1]) ∪ A₀`, and for `n ≥ 1` sends
//!
//! * `Bₙ = Sⁿ⁻¹(B₁)` to `Cₙ = Tⁿ⁻¹(C₁)` by `Tⁿ⁻¹ ∘ S⁻⁽ⁿ⁻¹⁾`,
//! * `Aₙ = Sⁿ(A₀)` to `Dₙ = Tⁿ⁻¹(D₁)` by `Tⁿ⁻¹ ∘ α ∘ S⁻ⁿ`,
//!
//! where `S`, `T` add 2 to the `φ`, `ψ` level, and
//!
//! ```text
//! A₀ = φ(Y × [1,∞]) - ψ(Z × (2,∞])
//! B₁ = C₁ = ψ(Z × [2,∞]) - φ(Y × (3,∞])
//! D₁ = φ(Y × [3,∞]) - ψ(Z × (4,∞])
//! ```
//!
//! `α = γ ∘ β : A₀ → D₁` stretches `ψ` levels `[2-r, 2]` onto `[2-r, 4]` and
//! then `φ` levels `[1, 3+r]` onto `[3, 3+r]`.
//!
//! The family of pieces is infinite. Each piece is a word in `S`, `T`, `α`
//! and is built the first time a point of its region is evaluated.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::Signed;

use crate::ambient::AmbientPoint;
use crate::chart::{ChartPreimage, ConeChart};
use crate::num::{ceil_int, floor_int, q, qi, ExtendedLevel, Rational};
use crate::pl::{swindle_lambda_mu, PlHomeo};
use crate::region::{is_k_interlaced, sup_inner_shift, sup_outer_shift, Prover, RegionError, RegionExpr};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SwindleError {
    #[error("charts are not 2-interlaced")]
    NotInterlaced,
    #[error("no admissible slack r was found")]
    NoSlack,
    #[error("slack r = {0} does not satisfy the required containments")]
    InvalidR(Rational),
    #[error("point is outside the chart")]
    OutsideChart,
    #[error("shift would leave the chart (level {0})")]
    ShiftOutOfRange(Rational),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Membership labels. `Core`, `B`, `A`, `VertexP` describe a point relative
/// to `φ`; `Core`, `C`, `D`, `VertexQ` relative to `ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionLabel {
    Core,
    B(u32),
    A(u32),
    VertexP,
    C(u32),
    D(u32),
    VertexQ,
}

impl RegionLabel {
    /// Position in the order `Core, B₁, A₁, B₂, A₂, …, vertex` (likewise for
    /// `C`, `D`).
    pub fn rank(self) -> u64 {
        match self {
            RegionLabel::Core => 0,
            RegionLabel::B(n) | RegionLabel::C(n) => 2 * u64::from(n) - 1,
            RegionLabel::A(n) | RegionLabel::D(n) => 2 * u64::from(n),
            RegionLabel::VertexP | RegionLabel::VertexQ => u64::MAX,
        }
    }

    /// The `n` of a numbered region, `0` for the core and `None` for a vertex.
    pub fn index(self) -> Option<u32> {
        match self {
            RegionLabel::Core => Some(0),
            RegionLabel::B(n) | RegionLabel::A(n) | RegionLabel::C(n) | RegionLabel::D(n) => Some(n),
            RegionLabel::VertexP | RegionLabel::VertexQ => None,
        }
    }
}

impl core::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RegionLabel::Core => f.write_str("Core"),
            RegionLabel::B(n) => write!(f, "B{n}"),
            RegionLabel::A(n) => write!(f, "A{n}"),
            RegionLabel::VertexP => f.write_str("P"),
            RegionLabel::C(n) => write!(f, "C{n}"),
            RegionLabel::D(n) => write!(f, "D{n}"),
            RegionLabel::VertexQ => f.write_str("Q"),
        }
    }
}

/// Deliberate defects used to check that the verification harness notices
/// them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// `α = β`.
    SkipGamma,
    /// `h(p) = p`.
    VertexFixed,
    /// Points outside `U ∪ V` are reflected through the origin of the view.
    SupportLeak,
    /// The inverse on `Dₙ` omits `α⁻¹`.
    InverseSkipsAlpha,
    /// `Aₙ` for `n ≥ 2` is sent by `Tⁿ⁻² ∘ α ∘ S⁻ⁿ`.
    IndexLag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    S(i64),
    T(i64),
    Alpha,
    AlphaInv,
}

/// `S^m` on `φ`: `φ(y, t) ↦ φ(y, t + 2m)`, fixing the vertex.
pub fn shift(chart: &ConeChart, x: &AmbientPoint, m: i64) -> Result<AmbientPoint, SwindleError> {
    match chart.invert(x) {
        ChartPreimage::Vertex => Ok(x.clone()),
        ChartPreimage::Outside => Err(SwindleError::OutsideChart),
        ChartPreimage::Interior(y, t) => {
            if m == 0 {
                return Ok(x.clone());
            }
            let s = t + qi(2 * m);
            if !s.is_positive() {
                return Err(SwindleError::ShiftOutOfRange(s));
            }
            Ok(chart.at(&y, &s))
        }
    }
}

/// Half the supremum of the admissible `r`, or for charts without a closed
/// form the largest `2⁻ʲ`, `j ≤ 30`, that works.
///
/// Admissible means `φ(Y×(1,∞]) ⊇ ψ(Z×[2-r,∞])` and
/// `φ(Y×(3+r,∞]) ⊇ ψ(Z×[4,∞])`.
pub fn compute_r(phi: &ConeChart, psi: &ConeChart) -> Result<Rational, SwindleError> {
    let mut prover = Prover::new();
    compute_r_with(&mut prover, phi, psi)
}

fn compute_r_with(prover: &mut Prover, phi: &ConeChart, psi: &ConeChart) -> Result<Rational, SwindleError> {
    if !is_k_interlaced(phi, psi, 2)? {
        return Err(SwindleError::NotInterlaced);
    }
    let exact = match (
        sup_inner_shift(phi, &qi(1), psi, &qi(2)),
        sup_outer_shift(phi, &qi(3), psi, &qi(4)),
    ) {
        (Some(a), Some(b)) => Some(if a < b { a } else { b }),
        _ => None,
    };
    let r = match exact {
        Some(sup) => {
            if !sup.is_positive() {
                return Err(SwindleError::NotInterlaced);
            }
            sup / qi(2)
        }
        None => (0..=30)
            .map(|j| q(1, 1i64 << j))
            .find(|r| r_admissible(prover, phi, psi, r) == Some(true))
            .ok_or(SwindleError::NoSlack)?,
    };
    if r_admissible(prover, phi, psi, &r) != Some(true) {
        return Err(SwindleError::InvalidR(r));
    }
    Ok(r)
}

fn r_admissible(prover: &mut Prover, phi: &ConeChart, psi: &ConeChart, r: &Rational) -> Option<bool> {
    if !r.is_positive() || *r >= qi(2) {
        return Some(false);
    }
    let first = prover.contains(
        &RegionExpr::open(phi, ExtendedLevel::int(1)),
        &RegionExpr::closed(psi, ExtendedLevel::Finite(qi(2) - r)),
    )?;
    if !first {
        return Some(false);
    }
    prover.contains(
        &RegionExpr::open(phi, ExtendedLevel::Finite(qi(3) + r)),
        &RegionExpr::closed(psi, ExtendedLevel::int(4)),
    )
}

/// The vertex-swapping homeomorphism of a 2-interlaced pair.
#[derive(Debug)]
pub struct Swindle {
    phi: ConeChart,
    psi: ConeChart,
    p: AmbientPoint,
    q: AmbientPoint,
    r: Rational,
    lambda: PlHomeo,
    mu: PlHomeo,
    fault: Fault,
    pieces: RefCell<BTreeMap<(bool, RegionLabel), Vec<Op>>>,
}

/// Builds the swap with `r` from [`compute_r`].
pub fn build_swindle(phi: &ConeChart, psi: &ConeChart) -> Result<Swindle, SwindleError> {
    let r = compute_r(phi, psi)?;
    Swindle::with_r(phi, psi, r, Fault::None)
}

impl Swindle {
    /// Builds the swap for a given slack `r`, which must be admissible.
    pub fn with_r(phi: &ConeChart, psi: &ConeChart, r: Rational, fault: Fault) -> Result<Self, SwindleError> {
        let mut prover = Prover::new();
        if !is_k_interlaced(phi, psi, 2)? {
            return Err(SwindleError::NotInterlaced);
        }
        if r_admissible(&mut prover, phi, psi, &r) != Some(true) {
            return Err(SwindleError::InvalidR(r));
        }
        let (lambda, mu) = swindle_lambda_mu(&r).map_err(|_| SwindleError::InvalidR(r.clone()))?;
        Ok(Swindle {
            phi: phi.clone(),
            psi: psi.clone(),
            p: phi.vertex(),
            q: psi.vertex(),
            r,
            lambda,
            mu,
            fault,
            pieces: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn phi(&self) -> &ConeChart {
        &self.phi
    }

    pub fn psi(&self) -> &ConeChart {
        &self.psi
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn fault(&self) -> Fault {
        self.fault
    }

    /// Number of pieces built so far.
    pub fn materialized(&self) -> usize {
        self.pieces.borrow().len()
    }

    /// Whether `x` lies in `U ∪ V`, the declared support.
    pub fn in_support(&self, x: &AmbientPoint) -> bool {
        self.phi.image_contains(x) || self.psi.image_contains(x)
    }

    /// Labels of `x` relative to `φ`, in rank order.
    pub fn classify_phi(&self, x: &AmbientPoint) -> Result<Vec<RegionLabel>, SwindleError> {
        let t = match self.phi.invert(x) {
            ChartPreimage::Vertex => return Ok(alloc::vec![RegionLabel::VertexP]),
            ChartPreimage::Outside => return Ok(alloc::vec![RegionLabel::Core]),
            ChartPreimage::Interior(_, t) => t,
        };
        if t <= qi(1) {
            return Ok(alloc::vec![RegionLabel::Core]);
        }
        let mut out = Vec::new();
        let span = (&t - qi(1)) / qi(2);
        let n_a = floor_int(&span);
        let z = shift(&self.phi, x, -n_a)?;
        if !self.psi.region_contains(&ExtendedLevel::int(2), false, &z) {
            out.push(if n_a == 0 {
                RegionLabel::Core
            } else {
                RegionLabel::A(index(n_a))
            });
        }
        let n_b = ceil_int(&span);
        let z = shift(&self.phi, x, -(n_b - 1))?;
        if self.psi.region_contains(&ExtendedLevel::int(2), true, &z) {
            out.push(RegionLabel::B(index(n_b)));
        }
        out.sort_by_key(|l| l.rank());
        Ok(out)
    }

    /// Labels of `x` relative to `ψ`, in rank order.
    pub fn classify_psi(&self, x: &AmbientPoint) -> Result<Vec<RegionLabel>, SwindleError> {
        let s = match self.psi.invert(x) {
            ChartPreimage::Vertex => return Ok(alloc::vec![RegionLabel::VertexQ]),
            ChartPreimage::Outside => return Ok(alloc::vec![RegionLabel::Core]),
            ChartPreimage::Interior(_, s) => s,
        };
        let mut out = Vec::new();
        if s <= qi(2) {
            out.push(RegionLabel::Core);
        }
        if s >= qi(2) {
            let half_s = &s / qi(2);
            let n_c = floor_int(&half_s);
            let w = shift(&self.psi, x, -(n_c - 1))?;
            if !self.phi.region_contains(&ExtendedLevel::int(3), false, &w) {
                out.push(RegionLabel::C(index(n_c)));
            }
            if s > qi(2) {
                let n_d = ceil_int(&half_s) - 1;
                let w = shift(&self.psi, x, -(n_d - 1))?;
                if self.phi.region_contains(&ExtendedLevel::int(3), true, &w) {
                    out.push(RegionLabel::D(index(n_d)));
                }
            }
        }
        out.sort_by_key(|l| l.rank());
        Ok(out)
    }

    fn piece(&self, inverse: bool, label: RegionLabel) -> Vec<Op> {
        if let Some(w) = self.pieces.borrow().get(&(inverse, label)) {
            return w.clone();
        }
        let word = match label {
            RegionLabel::B(n) => {
                let m = i64::from(n) - 1;
                alloc::vec![Op::S(-m), Op::T(m)]
            }
            RegionLabel::A(n) => {
                let n = i64::from(n);
                let lag = if self.fault == Fault::IndexLag && n >= 2 {
                    2
                } else {
                    1
                };
                alloc::vec![Op::S(-n), Op::Alpha, Op::T(n - lag)]
            }
            RegionLabel::C(n) => {
                let m = i64::from(n) - 1;
                alloc::vec![Op::T(-m), Op::S(m)]
            }
            RegionLabel::D(n) => {
                let n = i64::from(n);
                if self.fault == Fault::InverseSkipsAlpha {
                    alloc::vec![Op::T(-(n - 1)), Op::S(n)]
                } else {
                    alloc::vec![Op::T(-(n - 1)), Op::AlphaInv, Op::S(n)]
                }
            }
            _ => Vec::new(),
        };
        self.pieces.borrow_mut().insert((inverse, label), word.clone());
        word
    }

    fn run(&self, word: &[Op], x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        let mut x = x.clone();
        for op in word {
            x = match *op {
                Op::S(m) => shift(&self.phi, &x, m)?,
                Op::T(m) => shift(&self.psi, &x, m)?,
                Op::Alpha => self.alpha(&x)?,
                Op::AlphaInv => self.alpha_inv(&x)?,
            };
        }
        Ok(x)
    }

    /// `h(x)`, using the lowest-ranked region containing `x`.
    pub fn eval(&self, x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        if *x == self.p {
            return Ok(if self.fault == Fault::VertexFixed {
                self.p.clone()
            } else {
                self.q.clone()
            });
        }
        let labels = self.classify_phi(x)?;
        match labels.first() {
            Some(RegionLabel::Core) | None => Ok(self.leak(x)),
            Some(&l) => self.eval_piece(l, x),
        }
    }

    /// The constituent for region `label` applied to `x`, regardless of
    /// whether `x` lies in that region.
    pub fn eval_piece(&self, label: RegionLabel, x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        match label {
            RegionLabel::Core => Ok(self.leak(x)),
            RegionLabel::VertexP => self.eval(x),
            _ => self.run(&self.piece(false, label), x),
        }
    }

    /// `h⁻¹(x)`, using the lowest-ranked `ψ`-side region containing `x`.
    pub fn eval_inverse(&self, x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        if *x == self.q {
            return Ok(self.p.clone());
        }
        let labels = self.classify_psi(x)?;
        match labels.first() {
            Some(RegionLabel::Core) | None => Ok(self.leak(x)),
            Some(&l) => self.run(&self.piece(true, l), x),
        }
    }

    fn leak(&self, x: &AmbientPoint) -> AmbientPoint {
        if self.fault == Fault::SupportLeak && !self.in_support(x) {
            if let AmbientPoint::Plane(v) = x {
                return AmbientPoint::Plane(-v);
            }
        }
        x.clone()
    }

    /// `α = γ ∘ β` on `A₀`.
    pub fn alpha(&self, x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        let lo = qi(2) - &self.r;
        let y = match self.psi.invert(x) {
            ChartPreimage::Interior(z, s) if s >= lo => {
                let s2 = self
                    .lambda
                    .eval_rational(&s)
                    .map_err(|_| SwindleError::OutsideChart)?;
                self.psi.at(&z, &s2)
            }
            _ => x.clone(),
        };
        if self.fault == Fault::SkipGamma {
            return Ok(y);
        }
        let hi = qi(3) + &self.r;
        Ok(match self.phi.invert(&y) {
            ChartPreimage::Interior(w, t) if t <= hi => {
                let t2 = self
                    .mu
                    .eval_rational(&t)
                    .map_err(|_| SwindleError::OutsideChart)?;
                self.phi.at(&w, &t2)
            }
            _ => y,
        })
    }

    /// `α⁻¹ = β⁻¹ ∘ γ⁻¹` on `D₁`.
    pub fn alpha_inv(&self, x: &AmbientPoint) -> Result<AmbientPoint, SwindleError> {
        let hi = qi(3) + &self.r;
        let y = match self.phi.invert(x) {
            ChartPreimage::Interior(w, t) if t >= qi(3) && t <= hi => {
                let t2 = self.mu.inverse().eval_rational(&t).expect("level in [3, 3+r]");
                self.phi.at(&w, &t2)
            }
            _ => x.clone(),
        };
        let lo = qi(2) - &self.r;
        Ok(match self.psi.invert(&y) {
            ChartPreimage::Interior(z, s) if s >= lo && s <= qi(4) => {
                let s2 = self
                    .lambda
                    .inverse()
                    .eval_rational(&s)
                    .expect("level in [2-r, 4]");
                self.psi.at(&z, &s2)
            }
            _ => y,
        })
    }
}

fn index(n: i64) -> u32 {
    u32::try_from(n).expect("region index fits in u32")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{AmbientSpace, CycleShape};
    use crate::base::{BaseFunction, BaseGraph, BasePoint};
    use crate::geom::Vec2;
    use crate::pairs::make_offset_chart;

    fn f0() -> ConeChart {
        let amb = AmbientSpace::AbstractCone {
            base: BaseGraph::discrete(3).unwrap(),
        };
        ConeChart::identity(&amb).unwrap()
    }

    fn ray(v: usize, t: Rational) -> AmbientPoint {
        AmbientPoint::Ray {
            base: BasePoint::Vertex(v),
            level: t,
        }
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
    fn slack_values() {
        let phi = f0();
        assert_eq!(compute_r(&phi, &phi), Ok(q(1, 2)));
        let d = BaseFunction::from_vertices(phi.base(), alloc::vec![q(1, 2), q(-1, 2), qi(0)]).unwrap();
        let psi = make_offset_chart(&phi, &d).unwrap();
        assert_eq!(compute_r(&phi, &psi), Ok(q(1, 4)));
        let (a, b) = f2();
        assert_eq!(compute_r(&a, &b), Ok(q(1, 10)));
    }

    #[test]
    fn shifts() {
        let phi = f0();
        assert_eq!(shift(&phi, &ray(0, qi(1)), 1), Ok(ray(0, qi(3))));
        assert_eq!(shift(&phi, &AmbientPoint::Apex, 5), Ok(AmbientPoint::Apex));
        let once = shift(&phi, &ray(1, q(3, 2)), 0).unwrap();
        assert_eq!(
            shift(&phi, &once, -1),
            Err(SwindleError::ShiftOutOfRange(q(-1, 2)))
        );
    }

    #[test]
    fn labels_on_the_identity_pair() {
        let phi = f0();
        let h = build_swindle(&phi, &phi).unwrap();
        assert_eq!(
            h.classify_phi(&ray(0, q(5, 2))),
            Ok(alloc::vec![RegionLabel::B(1)])
        );
        assert_eq!(
            h.classify_psi(&ray(0, q(5, 2))),
            Ok(alloc::vec![RegionLabel::C(1)])
        );
        assert_eq!(
            h.classify_phi(&ray(2, qi(3))),
            Ok(alloc::vec![RegionLabel::B(1), RegionLabel::A(1)])
        );
        assert_eq!(
            h.classify_phi(&AmbientPoint::Apex),
            Ok(alloc::vec![RegionLabel::VertexP])
        );
    }

    #[test]
    fn values_on_the_identity_pair() {
        let phi = f0();
        let h = build_swindle(&phi, &phi).unwrap();
        assert_eq!(h.alpha(&ray(0, qi(1))), Ok(ray(0, qi(3))));
        assert_eq!(h.alpha(&ray(0, qi(2))), Ok(ray(0, qi(4))));
        assert_eq!(h.alpha(&ray(0, q(3, 2))), Ok(ray(0, q(31, 10))));
        assert_eq!(h.eval(&ray(1, q(5, 2))), Ok(ray(1, q(5, 2))));
        assert_eq!(h.eval(&ray(1, q(7, 2))), Ok(ray(1, q(31, 10))));
        assert_eq!(h.eval(&ray(1, q(11, 2))), Ok(ray(1, q(51, 10))));
        assert_eq!(h.eval_inverse(&ray(1, q(31, 10))), Ok(ray(1, q(7, 2))));
        assert_eq!(h.eval(&AmbientPoint::Apex), Ok(AmbientPoint::Apex));
        assert_eq!(h.eval(&ray(1, q(15, 4))), Ok(ray(1, q(67, 20))));
    }

    #[test]
    fn lazy_pieces() {
        let phi = f0();
        let h = build_swindle(&phi, &phi).unwrap();
        assert_eq!(h.materialized(), 0);
        h.eval(&ray(0, q(7, 2))).unwrap();
        h.eval(&ray(1, q(7, 2))).unwrap();
        assert_eq!(h.materialized(), 1);
    }

    #[test]
    fn planar_round_trips() {
        let (phi, psi) = f2();
        let h = build_swindle(&phi, &psi).unwrap();
        assert_eq!(h.eval(&phi.vertex()), Ok(psi.vertex()));
        for y in phi.base().sample_points(2) {
            for k in 1..30 {
                let x = phi.at(&y, &q(k, 3));
                let hx = h.eval(&x).unwrap();
                assert_eq!(h.eval_inverse(&hx), Ok(x));
            }
        }
    }

    #[test]
    fn skipping_gamma_breaks_the_overlap() {
        let phi = f0();
        let h = Swindle::with_r(&phi, &phi, q(1, 2), Fault::SkipGamma).unwrap();
        let x = ray(0, qi(3));
        assert_ne!(
            h.eval_piece(RegionLabel::B(1), &x),
            h.eval_piece(RegionLabel::A(1), &x)
        );
    }
}
