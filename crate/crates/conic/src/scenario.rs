//! Scenario files: a JSON document naming an ambient space, some charts and
//! a list of commands. Every number is a string `p/q` (or an integer) so
//! that nothing passes through a float.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use conic_core::base::BasePoint;
use conic_core::num::{one, parse_rational, zero, Rational};
use serde::de::{self, Deserializer};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown reference `{name}` in command {index} ({op})")]
    UnknownReference {
        name: String,
        index: usize,
        op: &'static str,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

impl ScenarioError {
    fn from_json(e: serde_json::Error) -> Self {
        ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// An exact rational read from a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(Q)
            .ok_or_else(|| de::Error::custom(format!("`{s}` is not a rational of the form p/q")))
    }
}

/// A base point written `v3` or `e1@1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base(pub BasePoint);

impl<'de> Deserialize<'de> for Base {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_base_point(&s)
            .map(Base)
            .ok_or_else(|| de::Error::custom(format!("`{s}` is not a base point like v0 or e1@1/2")))
    }
}

fn parse_base_point(s: &str) -> Option<BasePoint> {
    if let Some(v) = s.strip_prefix('v') {
        return v.parse().ok().map(BasePoint::Vertex);
    }
    let (e, t) = s.strip_prefix('e')?.split_once('@')?;
    let t = parse_rational(t)?;
    if t <= zero() || t >= one() {
        return None;
    }
    Some(BasePoint::edge(e.parse().ok()?, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureName {
    F0,
    F1,
    F2,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AmbientSpec {
    /// The cone over a graph on `vertices` vertices.
    Cone {
        vertices: usize,
        #[serde(default)]
        edges: Vec<(usize, usize)>,
    },
    /// The open square `(-half, half)²`.
    Square { half: Q },
    /// The suspension over the square cycle.
    Suspension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewSpec {
    North,
    South,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChartSpec {
    /// The standard chart of a cone or of a suspension's north pole.
    Identity,
    /// `of` with levels shifted by a PL function given by its vertex values.
    Offset { of: String, values: Vec<Q> },
    /// A polygon chart in a planar view; the width profile defaults to
    /// `(0,1/2), (1,1), (2,2)` with a linear tail.
    Planar {
        center: (Q, Q),
        scale: Q,
        #[serde(default)]
        profile: Option<Vec<(Q, Q)>>,
        #[serde(default)]
        view: Option<ViewSpec>,
    },
    /// A chart with the same rays as `of`, moved to have its vertex at `at`.
    Recentered { of: String, at: PointSpec },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointSpec {
    Apex,
    North,
    South,
    Plane(Q, Q),
    Ray(Base, Q),
    Band(Base, Q),
    /// `chart(base, level)`.
    On {
        chart: String,
        base: Base,
        level: Q,
    },
    /// The vertex of a chart.
    Vertex(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Range {
    pub from: Q,
    pub to: Q,
    pub step: Q,
}

impl Range {
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut v = self.from.0.clone();
        while v <= self.to.0 {
            out.push(v.clone());
            v += &self.step.0;
        }
        out
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridSpec {
    /// `chart(y, t)` for each listed base point (default: the vertices) and
    /// each level in the range.
    Levels {
        chart: String,
        levels: Range,
        #[serde(default)]
        bases: Option<Vec<Base>>,
    },
    /// Rectangular grid in a planar view.
    Plane {
        x: Range,
        y: Range,
        #[serde(default)]
        view: Option<ViewSpec>,
    },
    /// An explicit point list.
    Points { points: Vec<PointSpec> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    CheckInterlace {
        phi: String,
        psi: String,
        k: u32,
    },
    BuildH {
        name: String,
        phi: String,
        psi: String,
    },
    BuildHAlt {
        name: String,
        phi: String,
        psi: String,
    },
    Promote {
        name: String,
        phi: String,
        psi: String,
        k: u32,
    },
    VertexSwap {
        phi: String,
        psi: String,
    },
    Move {
        name: String,
        chart: String,
        from: PointSpec,
        to: PointSpec,
    },
    Reroute {
        path: Vec<PointSpec>,
        avoid: Vec<PointSpec>,
        #[serde(default)]
        out: Option<String>,
    },
    StrongN {
        name: String,
        sources: Vec<PointSpec>,
        targets: Vec<PointSpec>,
    },
    Verify {
        map: String,
    },
    Sample {
        map: String,
        grid: GridSpec,
        out: String,
    },
}

impl Command {
    pub fn op(&self) -> &'static str {
        match self {
            Command::CheckInterlace { .. } => "check-interlace",
            Command::BuildH { .. } => "build-h",
            Command::BuildHAlt { .. } => "build-h-alt",
            Command::Promote { .. } => "promote",
            Command::VertexSwap { .. } => "vertex-swap",
            Command::Move { .. } => "move",
            Command::Reroute { .. } => "reroute",
            Command::StrongN { .. } => "strong-n",
            Command::Verify { .. } => "verify",
            Command::Sample { .. } => "sample",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    /// Loads a named fixture's ambient space and its charts as `phi`, `psi`.
    #[serde(default)]
    pub fixture: Option<FixtureName>,
    #[serde(default)]
    pub ambient: Option<AmbientSpec>,
    #[serde(default)]
    pub charts: BTreeMap<String, ChartSpec>,
    pub commands: Vec<Command>,
}

/// The built-in map name, always available.
pub const IDENTITY: &str = "identity";

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(ScenarioError::from_json)?;
        s.validate()?;
        Ok(s)
    }

    /// Checks that every chart and map name is defined before it is used.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        match (&self.fixture, &self.ambient) {
            (None, None) => {
                return Err(ScenarioError::Invalid(
                    "needs a fixture or an ambient space".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Invalid(
                    "give a fixture or an ambient space, not both".into(),
                ))
            }
            _ => {}
        }
        let mut charts: BTreeSet<&str> = BTreeSet::new();
        if self.fixture.is_some() {
            charts.extend(["phi", "psi"]);
        }
        // Charts may refer to one another in any order as long as there is
        // no cycle; resolve by repeated passes.
        let mut pending: Vec<(&String, &ChartSpec)> = self.charts.iter().collect();
        loop {
            let before = pending.len();
            pending.retain(|(name, spec)| {
                let ready = chart_deps(spec).iter().all(|d| charts.contains(d.as_str()));
                if ready {
                    charts.insert(name.as_str());
                }
                !ready
            });
            if pending.is_empty() {
                break;
            }
            if pending.len() == before {
                let (name, spec) = pending[0];
                let missing = chart_deps(spec)
                    .into_iter()
                    .find(|d| !self.charts.contains_key(d.as_str()) && !charts.contains(d.as_str()))
                    .unwrap_or_else(|| name.clone());
                return Err(ScenarioError::UnknownReference {
                    name: missing,
                    index: 0,
                    op: "charts",
                });
            }
        }

        let mut charts: BTreeSet<String> = charts.into_iter().map(String::from).collect();
        let mut maps: BTreeSet<String> = BTreeSet::from([IDENTITY.to_string()]);
        for (index, cmd) in self.commands.iter().enumerate() {
            let op = cmd.op();
            let need_chart = |n: &str| -> Result<(), ScenarioError> {
                if charts.contains(n) {
                    Ok(())
                } else {
                    Err(ScenarioError::UnknownReference {
                        name: n.to_string(),
                        index,
                        op,
                    })
                }
            };
            let need_points = |ps: &[PointSpec]| -> Result<(), ScenarioError> {
                ps.iter().flat_map(point_deps).try_for_each(|n| need_chart(&n))
            };
            match cmd {
                Command::CheckInterlace { phi, psi, .. } | Command::VertexSwap { phi, psi } => {
                    need_chart(phi)?;
                    need_chart(psi)?;
                }
                Command::BuildH { name, phi, psi } | Command::BuildHAlt { name, phi, psi } => {
                    need_chart(phi)?;
                    need_chart(psi)?;
                    maps.insert(name.clone());
                }
                Command::Promote { name, phi, psi, .. } => {
                    need_chart(phi)?;
                    need_chart(psi)?;
                    charts.insert(name.clone());
                }
                Command::Move {
                    name,
                    chart,
                    from,
                    to,
                } => {
                    need_chart(chart)?;
                    need_points(&[from.clone(), to.clone()])?;
                    maps.insert(name.clone());
                }
                Command::Reroute { path, avoid, .. } => {
                    need_points(path)?;
                    need_points(avoid)?;
                }
                Command::StrongN {
                    name,
                    sources,
                    targets,
                } => {
                    need_points(sources)?;
                    need_points(targets)?;
                    maps.insert(name.clone());
                }
                Command::Verify { map } | Command::Sample { map, .. } => {
                    if !maps.contains(map) {
                        return Err(ScenarioError::UnknownReference {
                            name: map.clone(),
                            index,
                            op,
                        });
                    }
                    if let Command::Sample { grid, .. } = cmd {
                        let ranges = match grid {
                            GridSpec::Levels { chart, levels, .. } => {
                                need_chart(chart)?;
                                vec![levels]
                            }
                            GridSpec::Points { points } => {
                                need_points(points)?;
                                vec![]
                            }
                            GridSpec::Plane { x, y, .. } => vec![x, y],
                        };
                        if ranges.iter().any(|r| r.step.0 <= zero()) {
                            return Err(ScenarioError::Invalid(format!(
                                "command {index} ({op}): range step must be positive"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn chart_deps(spec: &ChartSpec) -> Vec<String> {
    match spec {
        ChartSpec::Identity | ChartSpec::Planar { .. } => Vec::new(),
        ChartSpec::Offset { of, .. } => vec![of.clone()],
        ChartSpec::Recentered { of, at } => {
            let mut v = vec![of.clone()];
            v.extend(point_deps(at));
            v
        }
    }
}

fn point_deps(p: &PointSpec) -> Vec<String> {
    match p {
        PointSpec::On { chart, .. } | PointSpec::Vertex(chart) => vec![chart.clone()],
        _ => Vec::new(),
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureName::F0 => "F0",
            FixtureName::F1 => "F1",
            FixtureName::F2 => "F2",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use conic_core::num::q;

    #[test]
    fn base_points_parse() {
        assert_eq!(parse_base_point("v2"), Some(BasePoint::Vertex(2)));
        assert_eq!(parse_base_point("e1@1/2"), Some(BasePoint::edge(1, q(1, 2))));
        assert_eq!(parse_base_point("e1@1"), None);
        assert_eq!(parse_base_point("x"), None);
    }

    #[test]
    fn decimals_are_rejected() {
        let err =
            Scenario::parse(r#"{"ambient": {"kind": "square", "half": "0.5"}, "commands": []}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn charts_resolve_in_any_order() {
        let s = r#"{
            "ambient": {"kind": "cone", "vertices": 2},
            "charts": {"a": {"kind": "offset", "of": "b", "values": ["0", "0"]}, "b": {"kind": "identity"}},
            "commands": [{"op": "build-h", "name": "h", "phi": "b", "psi": "a"}, {"op": "verify", "map": "h"}]
        }"#;
        Scenario::parse(s).unwrap();
    }

    #[test]
    fn maps_must_be_built_before_use() {
        let s = r#"{"fixture": "f0", "commands": [{"op": "verify", "map": "h"}, {"op": "build-h", "name": "h", "phi": "phi", "psi": "psi"}]}"#;
        match Scenario::parse(s).unwrap_err() {
            ScenarioError::UnknownReference { name, index, .. } => {
                assert_eq!((name.as_str(), index), ("h", 0))
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn ranges_include_both_ends() {
        let r = Range {
            from: Q(q(1, 2)),
            to: Q(q(3, 2)),
            step: Q(q(1, 2)),
        };
        assert_eq!(r.values(), vec![q(1, 2), q(1, 1), q(3, 2)]);
    }
}
