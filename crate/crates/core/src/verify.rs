//! Exact property checks for the constructions, reported with concrete
//! counterexamples.
//!
//! Nothing here uses a tolerance: every comparison is rational equality or
//! an exact region predicate.

use alloc::boxed::Box;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::ambient::{AmbientPoint, AmbientSpace};
use crate::base::BasePoint;
use crate::chart::{ChartPreimage, ConeChart};
use crate::fixtures::{self, ChartPair};
use crate::homeo::Homeo;
use crate::moves::radial_slide;
use crate::num::{q, qi, ExtendedLevel, Rational};
use crate::promotion::{promote, AlternateSwap, ChartTower, LimitChart};
use crate::region::{interlacing_conditions, is_k_interlaced_with, Prover, RegionExpr};
use crate::swindle::{compute_r, shift, Fault, RegionLabel, Swindle};

/// A point (or points) where a check fails, with a short explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub points: Vec<AmbientPoint>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub counterexample: Option<Counterexample>,
    /// Recorded for information only; does not affect the verdict.
    pub informational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Filled in by callers that can read a clock.
    pub elapsed_micros: Option<u64>,
}

impl VerificationReport {
    fn new(subject: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            subject: subject.into(),
            seed,
            checks: Vec::new(),
            elapsed_micros: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    fn push(&mut self, tally: Tally) {
        self.checks.push(tally.finish());
    }
}

/// Accumulates one check over many samples, keeping the first failure.
struct Tally {
    name: &'static str,
    samples: usize,
    failure: Option<Counterexample>,
    informational: bool,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            samples: 0,
            failure: None,
            informational: false,
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn record(
        &mut self,
        ok: bool,
        points: impl FnOnce() -> Vec<AmbientPoint>,
        detail: impl FnOnce() -> String,
    ) {
        self.samples += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Counterexample {
                points: points(),
                detail: detail(),
            });
        }
    }

    fn fail(&mut self, points: Vec<AmbientPoint>, detail: String) {
        self.record(false, || points, || detail);
    }

    fn finish(self) -> Check {
        Check {
            name: self.name.to_string(),
            passed: self.failure.is_none(),
            samples: self.samples,
            counterexample: self.failure,
            informational: self.informational,
        }
    }
}

/// Levels `1/2, 1, …, 13`.
pub fn level_grid() -> Vec<Rational> {
    (1..=26).map(|i| q(i, 2)).collect()
}

/// `chart(y, t)` over the vertices and edge midpoints of the base.
pub fn chart_samples(chart: &ConeChart, levels: &[Rational]) -> Vec<AmbientPoint> {
    let mut out = Vec::new();
    for y in chart.base().sample_points(1) {
        for t in levels {
            out.push(chart.at(&y, t));
        }
    }
    out
}

/// Up to `n` seeded random points of the ambient space satisfying `keep`.
pub fn random_samples(
    ambient: &AmbientSpace,
    seed: u64,
    n: usize,
    keep: &dyn Fn(&AmbientPoint) -> bool,
) -> Vec<AmbientPoint> {
    let mut rng = fixtures::rng(seed);
    let mut out = Vec::new();
    for _ in 0..n * 40 {
        if out.len() == n {
            break;
        }
        let x = fixtures::random_point(&mut rng, ambient);
        if keep(&x) {
            out.push(x);
        }
    }
    out
}

/// Checks a vertex-swapping map `h` of the pair `(φ, ψ)`: vertex, support,
/// inverse round trip, and the basis-mapping property. Maps built by
/// [`Swindle`] are also checked for overlap agreement of adjacent pieces
/// and for carrying `Bₙ` into `Cₙ` and `Aₙ` into `Dₙ`.
pub fn verify_lemma1(phi: &ConeChart, psi: &ConeChart, h: &Homeo, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("vertex swap", seed);
    let p = phi.vertex();
    let qv = psi.vertex();
    let regions = Swindle::with_r(
        phi,
        psi,
        compute_r(phi, psi).unwrap_or_else(|_| q(1, 1024)),
        Fault::None,
    )
    .ok();

    let mut t = Tally::new("vertex");
    let hp = h.eval(&p);
    t.record(
        hp.as_ref() == Ok(&qv),
        || vec![p.clone()],
        || format!("h(p) = {hp:?}, expected {qv}"),
    );
    let hq = h.eval_inverse(&qv);
    t.record(
        hq.as_ref() == Ok(&p),
        || vec![qv.clone()],
        || format!("h^-1(q) = {hq:?}, expected {p}"),
    );
    report.push(t);

    let in_uv = |x: &AmbientPoint| phi.image_contains(x) || psi.image_contains(x);
    let outside = random_samples(phi.ambient(), seed, 500, &|x| !in_uv(x));
    let mut t = Tally::new("support");
    for x in &outside {
        let y = h.eval(x);
        t.record(
            y.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("moved to {y:?} outside U ∪ V"),
        );
    }
    report.push(t);

    let in_both = |x: &AmbientPoint| phi.image_contains(x) && psi.image_contains(x);
    let shallow = |x: &AmbientPoint| within_depth(phi, x) && within_depth(psi, x);
    let mut grid = chart_samples(phi, &level_grid());
    grid.extend(
        chart_samples(psi, &level_grid())
            .into_iter()
            .filter(|x| phi.image_contains(x)),
    );
    grid.retain(|x| shallow(x));
    let mut t = Tally::new("support within U ∩ V").informational();
    for x in grid.iter().chain(chart_samples(psi, &level_grid()).iter()) {
        if in_uv(x) && !in_both(x) {
            let y = h.eval(x);
            t.record(
                y.as_ref() == Ok(x),
                || vec![x.clone()],
                || format!("moved to {y:?} outside U ∩ V"),
            );
        }
    }
    report.push(t);

    let mut t = Tally::new("inverse round trip");
    let mut inside = chart_random_samples(phi, psi, seed ^ 0x5eed, 200);
    inside.retain(|x| shallow(x));
    for x in grid.iter().chain(&outside).chain(&inside) {
        let there = h.eval(x).and_then(|y| h.eval_inverse(&y));
        t.record(
            there.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("h^-1(h(x)) = {there:?}"),
        );
        let back = h.eval_inverse(x).and_then(|y| h.eval(&y));
        t.record(
            back.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("h(h^-1(x)) = {back:?}"),
        );
    }
    report.push(t);

    // Depth of a point in each neighborhood basis: `k` when it lies in the
    // k-th element, `BASIS_DEPTH` for the vertex and anything deeper.
    let depths: Option<(Depth, Depth)> = match h {
        Homeo::Alternate(_) => Some((
            Box::new(|x: &AmbientPoint| tower_depth(phi, x, true)),
            Box::new(|x: &AmbientPoint| tower_depth(psi, x, false)),
        )),
        _ => regions.as_ref().map(|r| {
            (
                Box::new(move |x: &AmbientPoint| label_depth(r.classify_phi(x).ok())) as Depth,
                Box::new(move |x: &AmbientPoint| label_depth(r.classify_psi(x).ok())) as Depth,
            )
        }),
    };
    if let Some((from, to)) = depths {
        let mut t = Tally::new("basis mapping");
        for x in grid.iter().chain(core::iter::once(&p)) {
            let k = match from(x) {
                Some(k) if k >= 1 => k,
                Some(_) => continue,
                None => {
                    t.fail(vec![x.clone()], "classification failed".into());
                    continue;
                }
            };
            let y = match h.eval(x) {
                Ok(y) => y,
                Err(e) => {
                    t.fail(vec![x.clone()], format!("evaluation failed: {e}"));
                    continue;
                }
            };
            let image = if y == qv { Some(BASIS_DEPTH) } else { to(&y) };
            let ok = image.is_some_and(|d| d >= k);
            t.record(
                ok,
                || vec![x.clone(), y.clone()],
                || format!("element {k} maps to depth {image:?}"),
            );
        }
        report.push(t);
    }

    if let Homeo::Swap(sw, _) = h {
        overlap_checks(&mut report, sw, phi, psi);
    }
    report
}

/// Deepest chart level sampled by the swap suite. Points closer to a
/// vertex sit far up the chart tower of the other chart; the vertices
/// themselves are checked directly.
pub const SAMPLE_DEPTH: i64 = 14;

fn within_depth(chart: &ConeChart, x: &AmbientPoint) -> bool {
    match chart.invert(x) {
        ChartPreimage::Interior(_, t) => t <= qi(SAMPLE_DEPTH),
        ChartPreimage::Vertex => false,
        ChartPreimage::Outside => true,
    }
}

/// Deepest basis element checked.
const BASIS_DEPTH: u32 = 5;

type Depth<'a> = Box<dyn Fn(&AmbientPoint) -> Option<u32> + 'a>;

/// Least region index among the labels, capped at [`BASIS_DEPTH`];
/// vertices count as arbitrarily deep.
fn label_depth(labels: Option<Vec<RegionLabel>>) -> Option<u32> {
    let labels = labels.filter(|l| !l.is_empty())?;
    Some(
        labels
            .iter()
            .filter_map(|l| l.index())
            .min()
            .unwrap_or(BASIS_DEPTH)
            .min(BASIS_DEPTH),
    )
}

/// Largest `k <= BASIS_DEPTH` with `x` in `φ(Y × [2k+1, ∞])` (`closed`)
/// or in `φ(Y × (2k, ∞])`, `0` when there is none.
fn tower_depth(chart: &ConeChart, x: &AmbientPoint, closed: bool) -> Option<u32> {
    Some(match chart.invert(x) {
        ChartPreimage::Vertex => BASIS_DEPTH,
        ChartPreimage::Outside => 0,
        ChartPreimage::Interior(_, t) => (1..=BASIS_DEPTH)
            .rev()
            .find(|k| {
                let k = i64::from(*k);
                if closed {
                    t >= qi(2 * k + 1)
                } else {
                    t > qi(2 * k)
                }
            })
            .unwrap_or(0),
    })
}

fn overlap_checks(report: &mut VerificationReport, sw: &Swindle, phi: &ConeChart, psi: &ConeChart) {
    let mut t = Tally::new("overlap agreement");
    let bases = phi.base().sample_points(3);
    for n in 1..=6u32 {
        for y in &bases {
            let x = phi.at(y, &qi(2 * i64::from(n) + 1));
            let b = sw.eval_piece(RegionLabel::B(n), &x);
            let a = sw.eval_piece(RegionLabel::A(n), &x);
            t.record(
                b.is_ok() && a == b,
                || vec![x.clone()],
                || format!("on B{n} ∩ A{n}: {b:?} vs {a:?}"),
            );
        }
    }
    for n in 0..=6u32 {
        for z in psi.base().sample_points(3) {
            let edge = psi.at(&z, &qi(2));
            let x = match shift(phi, &edge, i64::from(n)) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let a = if n == 0 {
                sw.eval_piece(RegionLabel::Core, &x)
            } else {
                sw.eval_piece(RegionLabel::A(n), &x)
            };
            let b = sw.eval_piece(RegionLabel::B(n + 1), &x);
            t.record(
                a.is_ok() && a == b,
                || vec![x.clone()],
                || format!("on A{n} ∩ B{}: {a:?} vs {b:?}", n + 1),
            );
        }
    }
    report.push(t);

    let mut t = Tally::new("region images");
    for x in chart_samples(phi, &level_grid()) {
        let labels = match sw.classify_phi(&x) {
            Ok(l) => l,
            Err(e) => {
                t.fail(vec![x.clone()], format!("classification failed: {e}"));
                continue;
            }
        };
        let y = match sw.eval(&x) {
            Ok(y) => y,
            Err(e) => {
                t.fail(vec![x.clone()], format!("evaluation failed: {e}"));
                continue;
            }
        };
        let image = sw.classify_psi(&y).unwrap_or_default();
        for l in &labels {
            let want = match *l {
                RegionLabel::B(n) => RegionLabel::C(n),
                RegionLabel::A(n) => RegionLabel::D(n),
                RegionLabel::VertexP => RegionLabel::VertexQ,
                _ => continue,
            };
            t.record(
                image.contains(&want),
                || vec![x.clone(), y.clone()],
                || format!("{l} should map into {want}, image has {image:?}"),
            );
        }
    }
    report.push(t);
}

/// Checks that `φ′` agrees with `φ` on levels up to `2k - 1` and is
/// `(k+1)`-interlaced with `ψ`.
pub fn verify_promotion(
    phi: &ConeChart,
    psi: &ConeChart,
    k: u32,
    phi_prime: &ConeChart,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new(format!("promotion at k = {k}"), seed);
    let top = 2 * i64::from(k) - 1;
    let mut t = Tally::new("agrees below 2k-1");
    if phi_prime.base() != phi.base() {
        t.fail(vec![phi.vertex()], "charts have different bases".into());
    } else {
        for y in phi.base().sample_points(3) {
            for j in 1..=4 * top {
                let l = q(j, 4);
                let a = phi.at(&y, &l);
                let b = phi_prime.at(&y, &l);
                t.record(
                    a == b,
                    || vec![a.clone(), b.clone()],
                    || format!("level {l} at {y}"),
                );
            }
        }
    }
    report.push(t);

    let mut prover = Prover::new();
    let mut t = Tally::new("(k+1)-interlaced");
    let verdict = is_k_interlaced_with(&mut prover, phi_prime, psi, k + 1);
    t.samples = 1;
    if verdict != Ok(true) {
        let witness = interlacing_witness(&mut prover, phi_prime, psi, k + 1);
        t.failure = Some(match witness {
            Some((x, what)) => Counterexample {
                points: vec![x],
                detail: format!("{what}; decision {verdict:?}"),
            },
            None => Counterexample {
                points: vec![phi_prime.vertex()],
                detail: format!("no sampled witness; decision {verdict:?}"),
            },
        });
    }
    report.push(t);
    report
}

/// A sampled point of the inner region of a failing interlacing condition
/// that lies outside the outer region.
fn interlacing_witness(
    prover: &mut Prover,
    phi: &ConeChart,
    psi: &ConeChart,
    k: u32,
) -> Option<(AmbientPoint, String)> {
    for (outer, inner) in interlacing_conditions(phi, psi, k) {
        if prover.contains(&outer, &inner) == Some(true) {
            continue;
        }
        let (
            RegionExpr::Level {
                chart: oc,
                level: ol,
                closed: ocl,
            },
            RegionExpr::Level {
                chart: ic,
                level: il,
                closed: icl,
            },
        ) = (&outer, &inner)
        else {
            continue;
        };
        let a = match il {
            ExtendedLevel::Finite(a) => a.clone(),
            ExtendedLevel::Infinity => continue,
        };
        for m in [3, 7] {
            for y in ic.base().sample_points(m) {
                for j in 0..=64 {
                    if j == 0 && !*icl {
                        continue;
                    }
                    let x = ic.at(&y, &(&a + q(j, 32)));
                    if !oc.region_contains(ol, *ocl, &x) {
                        return Some((
                            x,
                            format!("inner level {} region not inside outer level {}", a, ol),
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Checks the limit chart: agreement with `φ` up to level 3, vertex `q`,
/// stability of the tower, preimages of sampled points, the continuity
/// surrogate `χ(Y × [2i+1, ∞]) ⊆ ψ(Z × (2i, ∞])` for `i ≤ 5`, and bounded
/// preimages of closed annuli.
pub fn verify_limit_chart(
    phi: &ConeChart,
    psi: &ConeChart,
    chi: &LimitChart,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("limit chart", seed);
    let bases = phi.base().sample_points(3);
    let qv = psi.vertex();

    let mut t = Tally::new("agrees below 3");
    for y in &bases {
        for j in 1..=12 {
            let l = q(j, 4);
            let a = phi.at(y, &l);
            let b = chi.eval(y, &ExtendedLevel::Finite(l.clone()));
            t.record(
                b.as_ref() == Ok(&a),
                || vec![a.clone()],
                || format!("χ at level {l} gives {b:?}"),
            );
        }
    }
    report.push(t);

    let mut t = Tally::new("vertex");
    for y in &bases {
        let v = chi.eval(y, &ExtendedLevel::Infinity);
        t.record(
            v.as_ref() == Ok(&qv),
            || vec![qv.clone()],
            || format!("χ(y, ∞) = {v:?}"),
        );
    }
    report.push(t);

    let mut t = Tally::new("tower stability");
    for i in 2..=5usize {
        for j in i + 1..=5 {
            let (ci, cj) = match (chi.tower().chart(i), chi.tower().chart(j)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => {
                    t.fail(
                        vec![phi.vertex()],
                        format!("tower failed: {:?} {:?}", a.err(), b.err()),
                    );
                    continue;
                }
            };
            for y in bases.iter().take(8) {
                for l in [q(1, 2), qi(1), qi(2), q(5, 2), qi(3)]
                    .into_iter()
                    .chain([q(2 * i as i64 - 1, 1) - q(1, 4)])
                {
                    if l >= qi(2 * i as i64 - 1) {
                        continue;
                    }
                    let a = ci.at(y, &l);
                    let b = cj.at(y, &l);
                    t.record(
                        a == b,
                        || vec![a.clone(), b.clone()],
                        || format!("φ{i} vs φ{j} at level {l}"),
                    );
                }
            }
        }
    }
    report.push(t);

    let mut t = Tally::new("preimages");
    let mut pts = chart_samples(phi, &level_grid());
    pts.extend(
        chart_samples(psi, &level_grid())
            .into_iter()
            .filter(|x| phi.image_contains(x)),
    );
    pts.retain(|x| within_depth(phi, x) && within_depth(psi, x));
    for x in &pts {
        let ok = match chi.invert(x) {
            Ok(ChartPreimage::Interior(y, l)) => {
                let back = chi.eval(&y, &ExtendedLevel::Finite(l));
                back.as_ref() == Ok(x)
            }
            _ => false,
        };
        t.record(
            ok,
            || vec![x.clone()],
            || "no preimage reproducing the point".into(),
        );
    }
    report.push(t);

    let mut t = Tally::new("continuity at the vertex");
    for i in 2..=5i64 {
        let target = ExtendedLevel::int(2 * i);
        for y in &bases {
            for l in [qi(2 * i + 1), q(4 * i + 3, 2), qi(2 * i + 2), qi(2 * i + 5)] {
                match chi.eval(y, &ExtendedLevel::Finite(l.clone())) {
                    Ok(x) => {
                        let ok = psi.region_contains(&target, false, &x);
                        t.record(
                            ok,
                            || vec![x.clone()],
                            || format!("χ(y, {l}) is not in ψ(Z × ({}, ∞]) for i = {i}", 2 * i),
                        );
                    }
                    Err(e) => t.fail(vec![phi.vertex()], format!("χ failed at level {l}: {e}")),
                }
            }
        }
    }
    report.push(t);

    let mut t = Tally::new("properness");
    let mut prover = Prover::new();
    for (a, b) in [(q(1, 2), qi(1)), (qi(1), qi(2)), (qi(2), qi(3)), (qi(3), qi(5))] {
        if phi.region_contains(&ExtendedLevel::Finite(a.clone()), true, &qv)
            && !phi.region_contains(&ExtendedLevel::Finite(b.clone()), false, &qv)
        {
            continue;
        }
        let outer = RegionExpr::open(phi, ExtendedLevel::Finite(b.clone()));
        let index = (2..=12i64).find(|i| {
            prover.contains(&outer, &RegionExpr::open(psi, ExtendedLevel::int(2 * i - 2))) == Some(true)
        });
        let mut annulus = Vec::new();
        for y in &bases {
            for j in 0..=4 {
                annulus.push(phi.at(y, &(&a + (&b - &a) * q(j, 4))));
            }
        }
        let Some(i) = index else {
            t.fail(
                vec![annulus[0].clone()],
                format!("no tower bound found for φ(Y × [{a}, {b}])"),
            );
            continue;
        };
        let bound = qi(2 * i - 1);
        for x in &annulus {
            let ok = matches!(chi.invert(x), Ok(ChartPreimage::Interior(_, ref l)) if *l < bound);
            t.record(
                ok,
                || vec![x.clone()],
                || format!("preimage of φ(Y × [{a}, {b}]) reaches level {bound}"),
            );
        }
    }
    report.push(t);
    report
}

/// Generic checks for any map: inverse round trips, identity outside the
/// declared support, and repeatable evaluation. Samples are `extra` plus
/// 500 seeded random points.
pub fn verify_generic_homeo(
    ambient: &AmbientSpace,
    h: &Homeo,
    declared: &dyn Fn(&AmbientPoint) -> bool,
    extra: &[AmbientPoint],
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("homeomorphism", seed);
    let mut pts: Vec<AmbientPoint> = extra.to_vec();
    pts.extend(random_samples(ambient, seed, 500, &|_| true));

    let mut t = Tally::new("inverse round trip");
    for x in &pts {
        let there = h.eval(x).and_then(|y| h.eval_inverse(&y));
        t.record(
            there.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("h^-1(h(x)) = {there:?}"),
        );
        let back = h.eval_inverse(x).and_then(|y| h.eval(&y));
        t.record(
            back.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("h(h^-1(x)) = {back:?}"),
        );
    }
    report.push(t);

    let mut t = Tally::new("support");
    for x in pts.iter().filter(|x| !declared(x)) {
        let y = h.eval(x);
        t.record(
            y.as_ref() == Ok(x),
            || vec![x.clone()],
            || format!("moved to {y:?} outside the declared support"),
        );
    }
    report.push(t);

    let mut t = Tally::new("determinism");
    for x in &pts {
        let a = h.eval(x);
        let b = h.eval(x);
        t.record(a == b, || vec![x.clone()], || "two evaluations differ".into());
    }
    report.push(t);
    report
}

/// A deliberately broken construction together with the check that must
/// catch it.
pub struct Mutation {
    pub name: &'static str,
    pub check: &'static str,
    pub run: Box<dyn Fn(u64) -> VerificationReport>,
}

fn swindle_mutation(
    name: &'static str,
    check: &'static str,
    pair: fn() -> ChartPair,
    fault: Fault,
) -> Mutation {
    Mutation {
        name,
        check,
        run: Box::new(move |seed| {
            let pair = pair();
            let r = compute_r(&pair.phi, &pair.psi).expect("interlaced fixture");
            let sw = Swindle::with_r(&pair.phi, &pair.psi, r, fault).expect("admissible r");
            verify_lemma1(&pair.phi, &pair.psi, &Homeo::Swap(Rc::new(sw), false), seed)
        }),
    }
}

/// The documented mutation fixtures.
pub fn mutations() -> Vec<Mutation> {
    vec![
        swindle_mutation("skip-gamma", "overlap agreement", fixtures::f0, Fault::SkipGamma),
        swindle_mutation("vertex-fixed", "vertex", fixtures::f2, Fault::VertexFixed),
        swindle_mutation("support-leak", "support", fixtures::f2, Fault::SupportLeak),
        swindle_mutation(
            "inverse-skips-alpha",
            "inverse round trip",
            fixtures::f1,
            Fault::InverseSkipsAlpha,
        ),
        swindle_mutation("index-lag", "region images", fixtures::f1, Fault::IndexLag),
        Mutation {
            name: "promotion-altered-below",
            check: "agrees below 2k-1",
            run: Box::new(|seed| {
                let pair = fixtures::f0();
                let good = promote(&pair.phi, &pair.psi, 2).expect("promotion of F0");
                // Shift the promoted chart's levels by 1/4 everywhere.
                let d = crate::base::BaseFunction::constant(good.base(), q(1, 4));
                let bad = ConeChart::radial(
                    &pair.ambient,
                    crate::base::BaseIso::identity(good.base()),
                    d,
                    crate::chart::Pole::Apex,
                )
                .expect("offset chart");
                verify_promotion(&pair.phi, &pair.psi, 2, &bad, seed)
            }),
        },
        Mutation {
            name: "identity-promotion",
            check: "(k+1)-interlaced",
            run: Box::new(|seed| {
                let pair = fixtures::f2();
                verify_promotion(&pair.phi, &pair.psi, 3, &pair.phi, seed)
            }),
        },
        Mutation {
            name: "truncated-tower",
            check: "continuity at the vertex",
            run: Box::new(|seed| {
                let pair = fixtures::f2();
                let tower = ChartTower::new(&pair.phi, &pair.psi)
                    .expect("interlaced")
                    .truncated(3);
                verify_limit_chart(&pair.phi, &pair.psi, &LimitChart::from_tower(tower), seed)
            }),
        },
        Mutation {
            name: "declared-support-mismatch",
            check: "support",
            run: Box::new(|seed| {
                let pair = fixtures::f0();
                let a = BasePoint::Vertex(0);
                let x = pair.phi.at(&a, &qi(1));
                let g = radial_slide(&pair.phi, &x, &qi(5)).expect("slide");
                let narrow = pair.phi.clone();
                // Claims support only above level 6 of the chart.
                let declared =
                    move |z: &AmbientPoint| narrow.region_contains(&ExtendedLevel::int(6), false, z);
                let extra = chart_samples(&pair.phi, &level_grid());
                verify_generic_homeo(&pair.ambient, &g, &declared, &extra, seed)
            }),
        },
    ]
}

/// Runs the swap built by the tower construction through
/// [`verify_lemma1`].
pub fn verify_alternate(
    pair: &ChartPair,
    seed: u64,
) -> Result<VerificationReport, crate::promotion::PromotionError> {
    let alt = AlternateSwap::new(&pair.phi, &pair.psi)?;
    Ok(verify_lemma1(
        &pair.phi,
        &pair.psi,
        &Homeo::Alternate(Rc::new(alt)),
        seed,
    ))
}

/// Seeded points `φ(y, t)` and `ψ(y, t)` with `t` a multiple of `1/8` in
/// `(0, 14]`, alternating between the charts.
fn chart_random_samples(phi: &ConeChart, psi: &ConeChart, seed: u64, n: usize) -> Vec<AmbientPoint> {
    let mut rng = fixtures::rng(seed);
    let bases = phi.base().sample_points(3);
    (0..n)
        .map(|i| {
            let chart = if i % 2 == 0 { phi } else { psi };
            let y = &bases[rng.gen_range(0..bases.len())];
            chart.at(y, &q(rng.gen_range(1..=112), 8))
        })
        .collect()
}

/// Random samples of `U ∪ V` for a seeded generator; exposed for callers
/// that want the same distribution.
pub fn support_samples(pair: &ChartPair, seed: u64, n: usize) -> Vec<AmbientPoint> {
    let mut rng = fixtures::rng(seed);
    let mut out = Vec::new();
    let bases = pair.phi.base().sample_points(3);
    while out.len() < n {
        let y = &bases[rng.gen_range(0..bases.len())];
        let l = q(rng.gen_range(1..=112), 8);
        out.push(pair.phi.at(y, &l));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swindle::build_swindle;

    fn swap(pair: &ChartPair) -> Homeo {
        Homeo::Swap(Rc::new(build_swindle(&pair.phi, &pair.psi).unwrap()), false)
    }

    #[test]
    fn named_pairs_pass_the_swap_suite() {
        for pair in [fixtures::f0(), fixtures::f1(), fixtures::f2()] {
            let r = verify_lemma1(&pair.phi, &pair.psi, &swap(&pair), 1);
            assert!(
                r.passed(),
                "{}: {:?}",
                pair.name,
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn identity_passes_generic_checks() {
        let pair = fixtures::f0();
        let r = verify_generic_homeo(&pair.ambient, &Homeo::Identity, &|_| false, &[], 3);
        assert!(r.passed());
    }

    #[test]
    fn every_mutation_is_caught() {
        for m in mutations() {
            let r = (m.run)(11);
            let c = r
                .check(m.check)
                .unwrap_or_else(|| panic!("{} lacks {}", m.name, m.check));
            assert!(!c.passed, "{} not caught by {}", m.name, m.check);
            assert!(
                c.counterexample.as_ref().is_some_and(|x| !x.points.is_empty()),
                "{}",
                m.name
            );
        }
    }
}
