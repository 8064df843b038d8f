//! Strictly increasing piecewise-linear bijections between intervals of levels.
//!
//! A [`PlHomeo`] is given by knots `(x_i, y_i)` with both coordinates strictly
//! increasing and is linear between consecutive knots. Two optional unbounded
//! pieces are supported:
//!
//! * an *open start*: the first knot is excluded from the domain (used for
//!   maps of `(0, a]` whose first knot is `(0, y_0)`),
//! * an *infinite tail*: beyond the last knot the map is the translation
//!   `t ↦ t + (y_n - x_n)` and `∞ ↦ ∞`.
//!
//! Both pieces are closed under inversion and composition, so every level
//! reparameterization of the cone constructions stays in this class.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::num::{q, qi, ExtendedLevel, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("knots are not strictly increasing")]
    NonMonotone,
    #[error("a map needs at least two knots, or one knot and an infinite tail")]
    EmptyDomain,
    #[error("level {0} is outside the domain")]
    OutOfDomain(ExtendedLevel),
    #[error("range of the inner map is not inside the domain of the outer map")]
    DomainMismatch,
    #[error("slack parameter r must be positive")]
    NonPositiveR,
    #[error("promotion index k must be at least 2")]
    InvalidK,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlHomeo {
    knots: Vec<(Rational, Rational)>,
    open_start: bool,
    tail: bool,
}

impl PlHomeo {
    pub fn new(knots: Vec<(Rational, Rational)>, open_start: bool, tail: bool) -> Result<Self, PlError> {
        if knots.is_empty() || (knots.len() < 2 && !tail) {
            return Err(PlError::EmptyDomain);
        }
        if knots.len() < 2 && open_start {
            return Err(PlError::EmptyDomain);
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(PlError::NonMonotone);
            }
        }
        Ok(PlHomeo {
            knots,
            open_start,
            tail,
        })
    }

    /// Builds a closed-interval map from level pairs. A final `(∞, ∞)` pair
    /// requests the infinite tail.
    pub fn from_levels(pairs: &[(ExtendedLevel, ExtendedLevel)]) -> Result<Self, PlError> {
        let mut knots = Vec::with_capacity(pairs.len());
        let mut tail = false;
        for (i, (a, b)) in pairs.iter().enumerate() {
            match (a, b) {
                (ExtendedLevel::Finite(a), ExtendedLevel::Finite(b)) if !tail => {
                    knots.push((a.clone(), b.clone()))
                }
                (ExtendedLevel::Infinity, ExtendedLevel::Infinity) if i + 1 == pairs.len() => tail = true,
                _ => return Err(PlError::NonMonotone),
            }
        }
        PlHomeo::new(knots, false, tail)
    }

    pub fn identity_on(lo: Rational, hi: Rational) -> Result<Self, PlError> {
        PlHomeo::new(alloc::vec![(lo.clone(), lo), (hi.clone(), hi)], false, false)
    }

    /// The identity of `(0, ∞]`.
    pub fn identity_levels() -> Self {
        PlHomeo::new(alloc::vec![(qi(0), qi(0)), (qi(1), qi(1))], true, true)
            .expect("identity knots are increasing")
    }

    /// The linear map of `[a0, a1]` onto `[b0, b1]`.
    pub fn linear(a0: Rational, b0: Rational, a1: Rational, b1: Rational) -> Result<Self, PlError> {
        PlHomeo::new(alloc::vec![(a0, b0), (a1, b1)], false, false)
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn has_open_start(&self) -> bool {
        self.open_start
    }

    pub fn has_tail(&self) -> bool {
        self.tail
    }

    pub fn domain_start(&self) -> &Rational {
        &self.knots[0].0
    }

    pub fn domain_end(&self) -> ExtendedLevel {
        if self.tail {
            ExtendedLevel::Infinity
        } else {
            ExtendedLevel::Finite(self.knots[self.knots.len() - 1].0.clone())
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let first = &self.knots[0].0;
        let lower_ok = if self.open_start { t > first } else { t >= first };
        lower_ok && (self.tail || t <= &self.knots[self.knots.len() - 1].0)
    }

    /// Evaluation allowing the excluded open-start knot (its limit value).
    pub(crate) fn eval_closure(&self, t: &Rational) -> Option<Rational> {
        let first = &self.knots[0].0;
        let last = self.knots.len() - 1;
        if t < first {
            return None;
        }
        if t >= &self.knots[last].0 {
            let (xn, yn) = &self.knots[last];
            return if t == xn {
                Some(yn.clone())
            } else if self.tail {
                Some(t + (yn - xn))
            } else {
                None
            };
        }
        let idx = self.knots.partition_point(|(x, _)| x <= t) - 1;
        let (x0, y0) = &self.knots[idx];
        let (x1, y1) = &self.knots[idx + 1];
        Some(y0 + (t - x0) * (y1 - y0) / (x1 - x0))
    }

    pub fn eval_rational(&self, t: &Rational) -> Result<Rational, PlError> {
        if !self.contains(t) {
            return Err(PlError::OutOfDomain(ExtendedLevel::Finite(t.clone())));
        }
        Ok(self.eval_closure(t).expect("domain checked"))
    }

    pub fn eval(&self, t: &ExtendedLevel) -> Result<ExtendedLevel, PlError> {
        match t {
            ExtendedLevel::Infinity if self.tail => Ok(ExtendedLevel::Infinity),
            ExtendedLevel::Infinity => Err(PlError::OutOfDomain(ExtendedLevel::Infinity)),
            ExtendedLevel::Finite(v) => self.eval_rational(v).map(ExtendedLevel::Finite),
        }
    }

    pub fn inverse(&self) -> PlHomeo {
        PlHomeo {
            knots: self.knots.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            open_start: self.open_start,
            tail: self.tail,
        }
    }

    /// `self ∘ inner`. Knots are the merge of `inner`'s knots with the
    /// preimages under `inner` of this map's knots.
    pub fn compose(&self, inner: &PlHomeo) -> Result<PlHomeo, PlError> {
        let g0 = &inner.knots[0].1;
        let f0 = &self.knots[0].0;
        let lower_ok = f0 < g0 || (f0 == g0 && (!self.open_start || inner.open_start));
        let upper_ok = if inner.tail {
            self.tail
        } else {
            self.tail || inner.knots[inner.knots.len() - 1].1 <= self.knots[self.knots.len() - 1].0
        };
        if !lower_ok || !upper_ok {
            return Err(PlError::DomainMismatch);
        }
        let inner_inv = inner.inverse();
        let mut inputs: Vec<Rational> = inner.knots.iter().map(|(x, _)| x.clone()).collect();
        for (x, _) in &self.knots {
            if let Some(pre) = inner_inv.eval_closure(x) {
                inputs.push(pre);
            }
        }
        inputs.sort();
        inputs.dedup();
        let knots = inputs
            .into_iter()
            .map(|t| {
                let mid = inner.eval_closure(&t).expect("input inside inner domain");
                let out = self.eval_closure(&mid).expect("checked range");
                (t, out)
            })
            .collect();
        PlHomeo::new(knots, inner.open_start, inner.tail)
    }

    /// Restriction to the closed interval `[lo, hi]` of the domain.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<PlHomeo, PlError> {
        if lo >= hi || !self.contains(lo) || !self.contains(hi) {
            return Err(PlError::DomainMismatch);
        }
        let mut knots = alloc::vec![(lo.clone(), self.eval_closure(lo).expect("inside"))];
        for (x, y) in &self.knots {
            if x > lo && x < hi {
                knots.push((x.clone(), y.clone()));
            }
        }
        knots.push((hi.clone(), self.eval_closure(hi).expect("inside")));
        PlHomeo::new(knots, false, false)
    }

    /// Equality as functions: same domain and same values everywhere.
    pub fn same_map(&self, other: &PlHomeo) -> bool {
        if self.knots[0].0 != other.knots[0].0
            || self.open_start != other.open_start
            || self.tail != other.tail
            || self.domain_end() != other.domain_end()
        {
            return false;
        }
        let mut probes: Vec<Rational> = self
            .knots
            .iter()
            .chain(other.knots.iter())
            .map(|(x, _)| x.clone())
            .collect();
        if self.tail {
            let far = probes.iter().max().cloned().expect("nonempty") + qi(1);
            probes.push(far);
        }
        probes
            .iter()
            .all(|t| self.eval_closure(t) == other.eval_closure(t))
    }

    /// `true` when the map is the identity on every level of `[lo, hi]`
    /// that lies in the domain.
    pub fn is_identity_between(&self, lo: &Rational, hi: &ExtendedLevel) -> bool {
        let mut probes: Vec<Rational> = alloc::vec![lo.clone()];
        for (x, _) in &self.knots {
            if x > lo && ExtendedLevel::Finite(x.clone()) < *hi {
                probes.push(x.clone());
            }
        }
        match hi {
            ExtendedLevel::Finite(h) => probes.push(h.clone()),
            ExtendedLevel::Infinity => {
                if !self.tail {
                    return false;
                }
                let last = &self.knots[self.knots.len() - 1];
                if last.0 != last.1 {
                    return false;
                }
            }
        }
        probes
            .iter()
            .filter(|t| self.eval_closure(t).is_some())
            .all(|t| self.eval_closure(t).as_ref() == Some(t))
    }

    /// Smallest closed level interval `[u, v]` outside of which the map is
    /// the identity; `None` for the identity map.
    pub fn moved_hull(&self) -> Option<(Rational, ExtendedLevel)> {
        let fixed: Vec<bool> = self.knots.iter().map(|(x, y)| x == y).collect();
        let first_moved = fixed.iter().position(|f| !f)?;
        let last = self.knots.len() - 1;
        let tail_moves = self.tail && !fixed[last];
        let u = self.knots[first_moved.saturating_sub(1)].0.clone();
        let v = if tail_moves {
            ExtendedLevel::Infinity
        } else {
            let last_moved = fixed.iter().rposition(|f| !f).expect("some knot moves");
            ExtendedLevel::Finite(self.knots[(last_moved + 1).min(last)].0.clone())
        };
        Some((u, v))
    }
}

/// The level maps of the vertex-swap construction:
/// `λ : [2-r, 2] → [2-r, 4]` fixing `2-r`, and `μ : [1, 3+r] → [3, 3+r]`
/// fixing `3+r`. Both linear.
pub fn swindle_lambda_mu(r: &Rational) -> Result<(PlHomeo, PlHomeo), PlError> {
    if !r.is_positive() {
        return Err(PlError::NonPositiveR);
    }
    let lambda = PlHomeo::linear(qi(2) - r, qi(2) - r, qi(2), qi(4))?;
    let mu = PlHomeo::linear(qi(1), qi(3), qi(3) + r, qi(3) + r)?;
    Ok((lambda, mu))
}

/// The three level maps used to promote a `k`-interlaced pair, with anchor
/// levels `2k-3, …, 2k+2`. Returned as `(λ, μ, ν)`, all homeomorphisms of
/// `(0, ∞]`:
///
/// * `λ = id` below `2k-3`, `λ(2k-1) = 2k-3+r`, `λ(2k+1) = 2k-1`, then `t ↦ t-2`;
/// * `μ = id` below `2k-2` and above `2k+2`, `μ(2k-2+r) = 2k`;
/// * `ν = id` below `2k-3` and above `2k-1+r`, and on `[2k-3, 2k-3+r]` it is
///   the inverse of `λ` restricted to `[2k-3, 2k-1]`.
pub fn make_promotion_triple(r: &Rational, k: u32) -> Result<(PlHomeo, PlHomeo, PlHomeo), PlError> {
    if k < 2 {
        return Err(PlError::InvalidK);
    }
    if !r.is_positive() {
        return Err(PlError::NonPositiveR);
    }
    let s = qi(2 * (i64::from(k) - 2));
    let l = |n: i64| qi(n) + &s;
    let z = || (qi(0), qi(0));
    let lambda = PlHomeo::new(
        alloc::vec![z(), (l(1), l(1)), (l(3), l(1) + r), (l(5), l(3))],
        true,
        true,
    )?;
    let mu = PlHomeo::new(
        alloc::vec![z(), (l(2), l(2)), (l(2) + r, l(4)), (l(6), l(6))],
        true,
        true,
    )?;
    let nu = PlHomeo::new(
        alloc::vec![z(), (l(1), l(1)), (l(1) + r, l(3)), (l(3) + r, l(3) + r)],
        true,
        true,
    )?;
    Ok((lambda, mu, nu))
}

/// `r = 1/2` convenience used by fixtures and docs.
pub fn half_r() -> Rational {
    q(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ExtendedLevel as L;

    fn lv(n: i64, d: i64) -> L {
        L::ratio(n, d)
    }

    #[test]
    fn make_identity_and_lambda() {
        let id = PlHomeo::from_levels(&[(L::int(1), L::int(1)), (L::int(2), L::int(2))]).unwrap();
        assert_eq!(id.eval(&L::int(2)).unwrap(), L::int(2));
        let lambda = PlHomeo::from_levels(&[(lv(3, 2), lv(3, 2)), (L::int(2), L::int(4))]).unwrap();
        assert_eq!(lambda.eval(&lv(7, 4)).unwrap(), lv(11, 4));
        assert_eq!(
            PlHomeo::from_levels(&[(L::int(1), L::int(2)), (L::int(2), L::int(1))]),
            Err(PlError::NonMonotone)
        );
        assert_eq!(
            PlHomeo::from_levels(&[(L::int(1), L::int(1))]),
            Err(PlError::EmptyDomain)
        );
    }

    #[test]
    fn out_of_domain() {
        let (lambda, _) = swindle_lambda_mu(&q(1, 2)).unwrap();
        assert!(matches!(lambda.eval(&L::int(3)), Err(PlError::OutOfDomain(_))));
        assert!(matches!(lambda.eval(&L::Infinity), Err(PlError::OutOfDomain(_))));
    }

    #[test]
    fn swindle_maps_r_half() {
        let (lambda, mu) = swindle_lambda_mu(&q(1, 2)).unwrap();
        assert_eq!(lambda.eval(&L::int(2)).unwrap(), L::int(4));
        assert_eq!(lambda.eval(&lv(3, 2)).unwrap(), lv(3, 2));
        assert_eq!(mu.eval(&lv(7, 2)).unwrap(), lv(7, 2));
        assert_eq!(mu.eval(&L::int(1)).unwrap(), L::int(3));
        assert_eq!(mu.eval(&lv(11, 4)).unwrap(), lv(67, 20));
        assert_eq!(lambda.inverse().eval(&L::int(4)).unwrap(), L::int(2));
        // λ restricted to the part landing in μ's domain: λ(19/10) = 7/2.
        let head = lambda.restrict(&q(3, 2), &q(19, 10)).unwrap();
        let mu_lambda = mu.compose(&head).unwrap();
        assert_eq!(mu_lambda.eval(&lv(3, 2)).unwrap(), lv(31, 10));
        assert_eq!(swindle_lambda_mu(&q(0, 1)), Err(PlError::NonPositiveR));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let (lambda, _) = swindle_lambda_mu(&q(1, 3)).unwrap();
        let both = lambda.compose(&lambda.inverse()).unwrap();
        let id = PlHomeo::identity_on(q(5, 3), qi(4)).unwrap();
        assert!(both.same_map(&id));
    }

    #[test]
    fn compose_rejects_mismatched_domains() {
        let (lambda, mu) = swindle_lambda_mu(&q(1, 2)).unwrap();
        // λ lands in [3/2, 4] which is not inside μ's domain [1, 7/2].
        assert_eq!(mu.compose(&lambda), Err(PlError::DomainMismatch));
        assert_eq!(lambda.compose(&mu), Err(PlError::DomainMismatch));
    }

    #[test]
    fn promotion_triple_k2() {
        let (lambda, mu, nu) = make_promotion_triple(&q(1, 2), 2).unwrap();
        assert_eq!(lambda.eval(&L::int(3)).unwrap(), lv(3, 2));
        assert_eq!(lambda.eval(&L::int(5)).unwrap(), L::int(3));
        assert_eq!(lambda.eval(&L::int(1)).unwrap(), L::int(1));
        assert_eq!(lambda.eval(&L::int(9)).unwrap(), L::int(7));
        assert_eq!(lambda.eval(&L::Infinity).unwrap(), L::Infinity);
        assert_eq!(mu.eval(&lv(5, 2)).unwrap(), L::int(4));
        assert_eq!(mu.eval(&L::int(6)).unwrap(), L::int(6));
        assert_eq!(nu.eval(&lv(3, 2)).unwrap(), L::int(3));
        let nl = nu.compose(&lambda).unwrap();
        for n in 1..=30 {
            let t = q(n, 10);
            assert_eq!(nl.eval_rational(&t).unwrap(), t);
        }
        assert_eq!(make_promotion_triple(&q(1, 2), 1), Err(PlError::InvalidK));
    }

    #[test]
    fn moved_hull_of_triple() {
        let (lambda, mu, nu) = make_promotion_triple(&q(1, 2), 3).unwrap();
        assert_eq!(lambda.moved_hull(), Some((qi(3), L::Infinity)));
        assert_eq!(mu.moved_hull(), Some((qi(4), L::int(8))));
        assert_eq!(nu.moved_hull(), Some((qi(3), lv(11, 2))));
        assert_eq!(PlHomeo::identity_levels().moved_hull(), None);
        assert!(mu.is_identity_between(&qi(8), &L::Infinity));
        assert!(!mu.is_identity_between(&qi(4), &L::int(6)));
    }
}
