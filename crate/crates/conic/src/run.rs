//! Executes a validated scenario.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use anyhow::{anyhow, bail, Context, Result};
use conic_core::ambient::{AmbientPoint, AmbientSpace, CycleShape, View};
use conic_core::base::{BaseFunction, BaseGraph};
use conic_core::chart::ConeChart;
use conic_core::fixtures;
use conic_core::geom::Vec2;
use conic_core::homeo::Homeo;
use conic_core::moves::{move_in_cone, reroute_path, strong_n_extend, DiscProvider, PlPath};
use conic_core::num::Pq;
use conic_core::pairs::{make_offset_chart, recenter_chart};
use conic_core::pl::PlHomeo;
use conic_core::promotion::{promote, AlternateSwap, LimitChart};
use conic_core::region::is_k_interlaced;
use conic_core::swindle::{build_swindle, Swindle};
use conic_core::verify::{
    verify_generic_homeo, verify_lemma1, verify_limit_chart, verify_promotion, Check, Counterexample,
    VerificationReport,
};
use thiserror::Error;

use crate::report::{ReportJson, RunReport, Step};
use crate::samples::{emit_samples, SampleRow};
use crate::scenario::{
    AmbientSpec, ChartSpec, Command, FixtureName, GridSpec, PointSpec, Scenario, ViewSpec, IDENTITY,
};

#[derive(Debug, Error)]
#[error("command {index} ({op}) failed: {source:#}")]
pub struct CommandFailed {
    pub index: usize,
    pub op: &'static str,
    pub source: anyhow::Error,
}

/// A constructed map with, when it swaps the vertices of a pair, that pair.
struct NamedMap {
    h: Homeo,
    pair: Option<(ConeChart, ConeChart)>,
}

pub struct Runner {
    ambient: AmbientSpace,
    charts: BTreeMap<String, ConeChart>,
    maps: BTreeMap<String, NamedMap>,
    seed: u64,
    out: PathBuf,
}

impl Runner {
    /// Builds the ambient space and the declared charts.
    pub fn new(s: &Scenario, seed: u64, out: &Path) -> Result<Self> {
        let mut charts = BTreeMap::new();
        let ambient = match (&s.fixture, &s.ambient) {
            (Some(f), _) => {
                let pair = match f {
                    FixtureName::F0 => fixtures::f0(),
                    FixtureName::F1 => fixtures::f1(),
                    FixtureName::F2 => fixtures::f2(),
                };
                charts.insert("phi".to_string(), pair.phi);
                charts.insert("psi".to_string(), pair.psi);
                pair.ambient
            }
            (None, Some(a)) => build_ambient(a)?,
            (None, None) => bail!("scenario has no ambient space"),
        };
        let mut maps = BTreeMap::new();
        maps.insert(
            IDENTITY.to_string(),
            NamedMap {
                h: Homeo::Identity,
                pair: None,
            },
        );
        let mut runner = Runner {
            ambient,
            charts,
            maps,
            seed,
            out: out.to_path_buf(),
        };
        // Validation guarantees an order exists.
        let mut pending: Vec<(&String, &ChartSpec)> = s.charts.iter().collect();
        while !pending.is_empty() {
            let pending_len = pending.len();
            let mut rest = Vec::new();
            for (name, spec) in pending {
                match runner.build_chart(spec) {
                    Ok(Some(c)) => {
                        runner.charts.insert(name.clone(), c);
                    }
                    Ok(None) => rest.push((name, spec)),
                    Err(e) => return Err(e.context(format!("chart `{name}`"))),
                }
            }
            if rest.len() == pending_len {
                let (name, spec) = rest[0];
                if let ChartSpec::Recentered { at, .. } = spec {
                    runner.point(at).with_context(|| format!("chart `{name}`"))?;
                }
                bail!("chart `{name}` cannot be resolved");
            }
            pending = rest;
        }
        Ok(runner)
    }

    /// `None` while a chart this one depends on is still missing.
    fn build_chart(&self, spec: &ChartSpec) -> Result<Option<ConeChart>> {
        Ok(Some(match spec {
            ChartSpec::Identity => ConeChart::identity(&self.ambient)?,
            ChartSpec::Offset { of, values } => {
                let Some(base) = self.charts.get(of) else {
                    return Ok(None);
                };
                let d =
                    BaseFunction::from_vertices(base.base(), values.iter().map(|v| v.0.clone()).collect())?;
                make_offset_chart(base, &d)?
            }
            ChartSpec::Planar {
                center,
                scale,
                profile,
                view,
            } => {
                let profile = match profile {
                    None => fixtures::f2_profile(),
                    Some(k) => PlHomeo::new(
                        k.iter().map(|(a, b)| (a.0.clone(), b.0.clone())).collect(),
                        true,
                        true,
                    )?,
                };
                let cycle = match &self.ambient {
                    AmbientSpace::Suspension { cycle } => cycle.clone(),
                    _ => CycleShape::square(),
                };
                ConeChart::planar(
                    &self.ambient,
                    cycle,
                    Vec2::new(center.0 .0.clone(), center.1 .0.clone()),
                    scale.0.clone(),
                    profile,
                    view.map(to_view),
                )?
            }
            ChartSpec::Recentered { of, at } => {
                let Some(base) = self.charts.get(of) else {
                    return Ok(None);
                };
                let Ok(p) = self.point(at) else { return Ok(None) };
                recenter_chart(base, &p)?
            }
        }))
    }

    fn chart(&self, name: &str) -> Result<&ConeChart> {
        self.charts
            .get(name)
            .ok_or_else(|| anyhow!("unknown chart `{name}`"))
    }

    fn point(&self, p: &PointSpec) -> Result<AmbientPoint> {
        let x = match p {
            PointSpec::Apex => AmbientPoint::Apex,
            PointSpec::North => AmbientPoint::North,
            PointSpec::South => AmbientPoint::South,
            PointSpec::Plane(x, y) => AmbientPoint::plane(x.0.clone(), y.0.clone()),
            PointSpec::Ray(b, t) => AmbientPoint::Ray {
                base: b.0.clone(),
                level: t.0.clone(),
            },
            PointSpec::Band(b, t) => AmbientPoint::Band {
                base: b.0.clone(),
                level: t.0.clone(),
            },
            PointSpec::On { chart, base, level } => {
                let c = self.chart(chart)?;
                if !c.base().contains(&base.0) {
                    bail!("{} is not a point of the base of `{chart}`", base.0);
                }
                if level.0 <= conic_core::num::zero() {
                    bail!("chart levels must be positive");
                }
                c.at(&base.0, &level.0)
            }
            PointSpec::Vertex(chart) => self.chart(chart)?.vertex(),
        };
        if !self.ambient.contains(&x) {
            bail!("{x} is not a point of the ambient space");
        }
        Ok(x)
    }

    fn points(&self, ps: &[PointSpec]) -> Result<Vec<AmbientPoint>> {
        ps.iter().map(|p| self.point(p)).collect()
    }

    fn pair(&self, phi: &str, psi: &str) -> Result<(ConeChart, ConeChart)> {
        Ok((self.chart(phi)?.clone(), self.chart(psi)?.clone()))
    }

    /// Runs every command in order, stopping at the first failure to build.
    pub fn run(&mut self, s: &Scenario) -> Result<RunReport, CommandFailed> {
        let mut steps = Vec::new();
        for (index, cmd) in s.commands.iter().enumerate() {
            let op = cmd.op();
            let mut step = Step {
                index,
                op,
                notes: Vec::new(),
                reports: Vec::new(),
            };
            self.execute(cmd, &mut step)
                .map_err(|source| CommandFailed { index, op, source })?;
            steps.push(step);
        }
        let name = s.name.clone().unwrap_or_else(|| "scenario".into());
        Ok(RunReport::new(name, self.seed, steps))
    }

    fn execute(&mut self, cmd: &Command, step: &mut Step) -> Result<()> {
        let seed = self.seed;
        match cmd {
            Command::CheckInterlace { phi, psi, k } => {
                let (a, b) = self.pair(phi, psi)?;
                let ok = is_k_interlaced(&a, &b, *k).map_err(|e| anyhow!("{e}"))?;
                step.reports.push(single(
                    format!("{phi}, {psi} are {k}-interlaced"),
                    seed,
                    "interlacing conditions",
                    ok,
                    Vec::new,
                ));
            }
            Command::BuildH { name, phi, psi } => {
                let (a, b) = self.pair(phi, psi)?;
                let sw = build_swindle(&a, &b)?;
                step.notes
                    .push(format!("built {name}: vertex swap with r = {}", Pq(sw.r())));
                self.define(name, Homeo::Swap(Rc::new(sw), false), Some((a, b)));
            }
            Command::BuildHAlt { name, phi, psi } => {
                let (a, b) = self.pair(phi, psi)?;
                let alt = AlternateSwap::new(&a, &b)?;
                step.notes
                    .push(format!("built {name}: swap through the limit chart"));
                self.define(name, Homeo::Alternate(Rc::new(alt)), Some((a, b)));
            }
            Command::Promote { name, phi, psi, k } => {
                let (a, b) = self.pair(phi, psi)?;
                let c = promote(&a, &b, *k)?;
                step.reports
                    .push((&verify_promotion(&a, &b, *k, &c, seed)).into());
                step.notes.push(format!("built chart {name}"));
                self.charts.insert(name.clone(), c);
            }
            Command::VertexSwap { phi, psi } => {
                let (a, b) = self.pair(phi, psi)?;
                let chi = LimitChart::new(&a, &b)?;
                step.reports
                    .push((&verify_limit_chart(&a, &b, &chi, seed)).into());
            }
            Command::Move {
                name,
                chart,
                from,
                to,
            } => {
                let c = self.chart(chart)?.clone();
                let (x, y) = (self.point(from)?, self.point(to)?);
                let h = move_in_cone(&c, &x, &y)?;
                let got = h.eval(&x)?;
                step.reports.push(single(
                    format!("move {x} to {y}"),
                    seed,
                    "maps source to target",
                    got == y,
                    || vec![x.clone(), got.clone()],
                ));
                self.define(name, Homeo::Declared(Box::new(h), vec![c]), None);
            }
            Command::Reroute { path, avoid, out } => {
                let pts = self.points(path)?;
                let f = self.points(avoid)?;
                if pts.len() < 2 {
                    bail!("a path needs at least two points");
                }
                let view = self
                    .ambient
                    .common_view(&pts[0], &pts[pts.len() - 1])
                    .ok_or_else(|| anyhow!("path endpoints share no planar view"))?;
                let p = PlPath::new(&self.ambient, view, pts)?;
                let r = reroute_path(&p, &f, &DiscProvider)?;
                let mut report = VerificationReport {
                    subject: format!("reroute around {} points", f.len()),
                    seed,
                    checks: Vec::new(),
                    elapsed_micros: None,
                };
                report.checks.push(check(
                    "endpoints preserved",
                    r.start() == p.start() && r.end() == p.end(),
                    || vec![r.start().clone(), r.end().clone()],
                ));
                let hit: Vec<AmbientPoint> = f.iter().filter(|x| r.meets(x)).cloned().collect();
                report
                    .checks
                    .push(check("avoids every point", hit.is_empty(), || hit.clone()));
                step.reports.push((&report).into());
                step.notes
                    .push(format!("rerouted path has {} waypoints", r.waypoints().len()));
                if let Some(file) = out {
                    let rows: Vec<SampleRow> = r
                        .waypoints()
                        .iter()
                        .map(|w| SampleRow::new(w.clone(), String::new(), w.clone()))
                        .collect();
                    let target = self.out.join(file);
                    emit_samples(&rows, &target)?;
                    step.notes.push(format!("wrote {file}"));
                }
            }
            Command::StrongN {
                name,
                sources,
                targets,
            } => {
                let s = self.points(sources)?;
                let t = self.points(targets)?;
                let h = strong_n_extend(&self.ambient, &s, &t)?;
                let mut report = VerificationReport {
                    subject: format!("strong {}-homogeneity move", s.len()),
                    seed,
                    checks: Vec::new(),
                    elapsed_micros: None,
                };
                let mut bad = Vec::new();
                for (a, b) in s.iter().zip(&t) {
                    let got = h.eval(a)?;
                    if &got != b {
                        bad = vec![a.clone(), got];
                        break;
                    }
                }
                report
                    .checks
                    .push(check("maps sources to targets", bad.is_empty(), || bad.clone()));
                step.reports.push((&report).into());
                step.notes.push(format!("built {name} from {} stages", h.len()));
                self.define(name, h, None);
            }
            Command::Verify { map } => {
                let m = &self.maps[map];
                let report = match &m.pair {
                    Some((a, b)) => verify_lemma1(a, b, &m.h, seed),
                    None => verify_generic_homeo(&self.ambient, &m.h, &|x| m.h.in_support(x), &[], seed),
                };
                step.reports.push(ReportJson::from(&report));
            }
            Command::Sample { map, grid, out } => {
                let rows = self.sample(map, grid)?;
                let target = self.out.join(out);
                emit_samples(&rows, &target)?;
                step.notes.push(format!("wrote {} rows to {out}", rows.len()));
            }
        }
        Ok(())
    }

    fn define(&mut self, name: &str, h: Homeo, pair: Option<(ConeChart, ConeChart)>) {
        self.maps.insert(name.to_string(), NamedMap { h, pair });
    }

    fn grid(&self, grid: &GridSpec) -> Result<Vec<AmbientPoint>> {
        Ok(match grid {
            GridSpec::Levels { chart, levels, bases } => {
                let c = self.chart(chart)?;
                let bases = match bases {
                    Some(b) => b.iter().map(|b| b.0.clone()).collect(),
                    None => c.base().sample_points(0),
                };
                let mut out = Vec::new();
                for y in &bases {
                    if !c.base().contains(y) {
                        bail!("{y} is not a point of the base of `{chart}`");
                    }
                    for t in levels.values() {
                        if t <= conic_core::num::zero() {
                            bail!("chart levels must be positive");
                        }
                        out.push(c.at(y, &t));
                    }
                }
                out
            }
            GridSpec::Plane { x, y, view } => {
                let view = match (&self.ambient, view) {
                    (AmbientSpace::Suspension { .. }, v) => Some(v.map(to_view).unwrap_or(View::North)),
                    (_, Some(_)) => bail!("views only apply to a suspension"),
                    (_, None) => None,
                };
                if matches!(self.ambient, AmbientSpace::AbstractCone { .. }) {
                    bail!("the abstract cone has no planar grid; use a level grid");
                }
                let mut out = Vec::new();
                for a in x.values() {
                    for b in y.values() {
                        let p = self.ambient.from_view(view, &Vec2::new(a.clone(), b));
                        if !self.ambient.contains(&p) {
                            bail!("grid point {p} is outside the ambient space");
                        }
                        out.push(p);
                    }
                }
                out
            }
            GridSpec::Points { points } => self.points(points)?,
        })
    }

    fn sample(&self, map: &str, grid: &GridSpec) -> Result<Vec<SampleRow>> {
        let m = &self.maps[map];
        let classifier: Option<Swindle> = match &m.pair {
            Some((a, b)) => Some(build_swindle(a, b)?),
            None => None,
        };
        self.grid(grid)?
            .into_iter()
            .map(|x| {
                let region = match &classifier {
                    Some(sw) => sw
                        .classify_phi(&x)?
                        .first()
                        .map(ToString::to_string)
                        .unwrap_or_default(),
                    None => String::new(),
                };
                let y = m.h.eval(&x).with_context(|| format!("evaluating {map} at {x}"))?;
                Ok(SampleRow::new(x, region, y))
            })
            .collect()
    }
}

fn build_ambient(a: &AmbientSpec) -> Result<AmbientSpace> {
    Ok(match a {
        AmbientSpec::Cone { vertices, edges } => AmbientSpace::AbstractCone {
            base: BaseGraph::new(*vertices, edges)?,
        },
        AmbientSpec::Square { half } => AmbientSpace::open_square(half.0.clone())?,
        AmbientSpec::Suspension => fixtures::suspension_c4(),
    })
}

fn to_view(v: ViewSpec) -> View {
    match v {
        ViewSpec::North => View::North,
        ViewSpec::South => View::South,
    }
}

fn check(name: &str, ok: bool, points: impl FnOnce() -> Vec<AmbientPoint>) -> Check {
    Check {
        name: name.to_string(),
        passed: ok,
        samples: 1,
        counterexample: (!ok).then(|| Counterexample {
            points: points(),
            detail: "exact comparison failed".into(),
        }),
        informational: false,
    }
}

fn single(
    subject: String,
    seed: u64,
    name: &str,
    ok: bool,
    points: impl FnOnce() -> Vec<AmbientPoint>,
) -> ReportJson {
    let report = VerificationReport {
        subject,
        seed,
        checks: vec![check(name, ok, points)],
        elapsed_micros: None,
    };
    (&report).into()
}
