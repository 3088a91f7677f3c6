//! Quivers with a finite acyclic core and finitely many rays ("tails") whose
//! orientation is eventually periodic.
//!
//! Tail `t` consists of the vertices `Tail(t, i)`, `i ≥ 1`; tail edge `n`
//! joins tail vertex `n` and `n + 1`, where tail vertex 0 is the attach point.
//! Letter `n` of the orientation word says whether that edge points away from
//! the core (`out`) or towards it (`in`).

use crate::error::{Error, Result};
use crate::linalg::Field;
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Out,
    In,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Out => Dir::In,
            Dir::In => Dir::Out,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationWord {
    #[serde(default)]
    pub prefix: Vec<Dir>,
    pub period: Vec<Dir>,
}

impl OrientationWord {
    pub fn new(prefix: Vec<Dir>, period: Vec<Dir>) -> Self {
        OrientationWord { prefix, period }
    }

    pub fn constant(d: Dir) -> Self {
        OrientationWord { prefix: vec![], period: vec![d] }
    }

    pub fn letter(&self, n: u64) -> Dir {
        let p = self.prefix.len() as u64;
        if n < p {
            self.prefix[n as usize]
        } else {
            self.period[((n - p) % self.period.len() as u64) as usize]
        }
    }

    pub fn flipped(&self) -> Self {
        OrientationWord {
            prefix: self.prefix.iter().map(|d| d.flip()).collect(),
            period: self.period.iter().map(|d| d.flip()).collect(),
        }
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period_len(&self) -> u64 {
        self.period.len() as u64
    }

    /// When the word is eventually constant `d`: the least `m` with letter `n = d`
    /// for all `n ≥ m`.
    pub fn constant_from(&self) -> Option<(Dir, u64)> {
        let d = self.period[0];
        if self.period.iter().any(|&x| x != d) {
            return None;
        }
        let mut m = self.prefix.len();
        while m > 0 && self.prefix[m - 1] == d {
            m -= 1;
        }
        Some((d, m as u64))
    }

    /// Number of leading letters equal to `d` (`None` = all of them).
    pub fn leading(&self, d: Dir) -> Option<u64> {
        let p = self.prefix.len() as u64;
        let per = self.period.len() as u64;
        (0..p + per).find(|&n| self.letter(n) != d)
    }

    /// Index from which the word is purely periodic.
    pub fn settled(&self) -> u64 {
        self.prefix.len() as u64
    }
}

fn names<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
    v.into_iter().map(|x| value_name(&x).map_err(serde::de::Error::custom)).collect()
}

fn name<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    value_name(&v).map_err(serde::de::Error::custom)
}

fn value_name(v: &serde_json::Value) -> std::result::Result<String, String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("vertex names must be strings or integers, got {other}")),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSpec {
    #[serde(default, deserialize_with = "names")]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    #[serde(deserialize_with = "name")]
    pub from: String,
    #[serde(deserialize_with = "name")]
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSpec {
    #[serde(deserialize_with = "name")]
    pub attach: String,
    #[serde(default)]
    pub prefix: Vec<Dir>,
    pub period: Vec<Dir>,
    /// Optional integer naming of the tail vertices: `Tail(t, i)` is shown as
    /// `label_start + (i − 1)·label_step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_start: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_step: Option<i64>,
}

/// Canonical infinite Dynkin layouts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Shorthand {
    /// Vertices 0, 1, 2, …; letter n orients the edge n — n+1 (`out`: n → n+1).
    #[serde(rename = "A_inf")]
    AInf {
        #[serde(default)]
        prefix: Vec<Dir>,
        period: Vec<Dir>,
    },
    /// Vertices ℤ; `right` orients n — n+1 for n ≥ 0, `left` orients −n — −n−1
    /// (`out`: −n → −n−1).
    #[serde(rename = "A_biinf")]
    ABiinf { left: OrientationWord, right: OrientationWord },
    /// Fork vertices 0, 1 attached to 2, spine 2, 3, …; `fork[k]` orients the
    /// edge 2 — k (`out`: 2 → k), the word orients 2+n — 3+n.
    #[serde(rename = "D_inf")]
    DInf {
        fork: [Dir; 2],
        #[serde(default)]
        prefix: Vec<Dir>,
        period: Vec<Dir>,
    },
}

/// The JSON document accepted by [`build_quiver`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    #[serde(default)]
    pub core: CoreSpec,
    #[serde(default)]
    pub tails: Vec<TailSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shorthand: Option<Shorthand>,
}

impl QuiverSpec {
    pub fn from_json(s: &str) -> Result<QuiverSpec> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn finite(vertices: &[&str], arrows: &[(&str, &str)]) -> QuiverSpec {
        QuiverSpec {
            core: CoreSpec {
                vertices: vertices.iter().map(|s| s.to_string()).collect(),
                arrows: arrows
                    .iter()
                    .map(|(a, b)| ArrowSpec { from: a.to_string(), to: b.to_string(), label: None })
                    .collect(),
            },
            tails: vec![],
            shorthand: None,
        }
    }

    pub fn a_inf(word: OrientationWord) -> QuiverSpec {
        QuiverSpec {
            shorthand: Some(Shorthand::AInf { prefix: word.prefix, period: word.period }),
            ..Default::default()
        }
    }

    pub fn a_biinf(left: OrientationWord, right: OrientationWord) -> QuiverSpec {
        QuiverSpec { shorthand: Some(Shorthand::ABiinf { left, right }), ..Default::default() }
    }

    pub fn d_inf(fork: [Dir; 2], word: OrientationWord) -> QuiverSpec {
        QuiverSpec {
            shorthand: Some(Shorthand::DInf { fork, prefix: word.prefix, period: word.period }),
            ..Default::default()
        }
    }

    /// Compiles a shorthand into explicit core + tails.
    pub fn expanded(&self) -> Result<QuiverSpec> {
        let Some(sh) = &self.shorthand else { return Ok(self.clone()) };
        if !self.core.vertices.is_empty() || !self.core.arrows.is_empty() || !self.tails.is_empty() {
            return Err(Error::Parse("a shorthand excludes explicit core and tails".into()));
        }
        let tail = |attach: &str, w: &OrientationWord| TailSpec {
            attach: attach.into(),
            prefix: w.prefix.clone(),
            period: w.period.clone(),
            label_start: None,
            label_step: None,
        };
        let spec = match sh {
            Shorthand::AInf { prefix, period } => QuiverSpec {
                core: CoreSpec { vertices: vec!["0".into()], arrows: vec![] },
                tails: vec![tail("0", &OrientationWord::new(prefix.clone(), period.clone()))],
                shorthand: None,
            },
            Shorthand::ABiinf { left, right } => QuiverSpec {
                core: CoreSpec { vertices: vec!["0".into()], arrows: vec![] },
                tails: vec![tail("0", right), tail("0", left)],
                shorthand: None,
            },
            Shorthand::DInf { fork, prefix, period } => {
                let arrow = |k: &str, d: Dir| match d {
                    Dir::Out => ArrowSpec { from: "2".into(), to: k.into(), label: None },
                    Dir::In => ArrowSpec { from: k.into(), to: "2".into(), label: None },
                };
                QuiverSpec {
                    core: CoreSpec {
                        vertices: vec!["0".into(), "1".into(), "2".into()],
                        arrows: vec![arrow("0", fork[0]), arrow("1", fork[1])],
                    },
                    tails: vec![tail("2", &OrientationWord::new(prefix.clone(), period.clone()))],
                    shorthand: None,
                }
            }
        };
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Core(usize),
    /// `Tail(t, i)` with `i ≥ 1`.
    Tail(usize, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Core(usize),
    /// Edge `n` of tail `t`, between tail vertices `n` and `n + 1`.
    Tail(usize, u64),
}

/// A path in traversal order: `arrows[0]` starts at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: Vertex,
    pub target: Vertex,
    pub arrows: Vec<Arrow>,
}

impl Path {
    pub fn trivial(x: Vertex) -> Path {
        Path { source: x, target: x, arrows: vec![] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CoreArrow {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Tail {
    pub attach: usize,
    pub word: OrientationWord,
    pub label_start: Option<i64>,
    pub label_step: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A_{n}"),
            DynkinType::D(n) => write!(f, "D_{n}"),
            DynkinType::E6 => write!(f, "E_6"),
            DynkinType::E7 => write!(f, "E_7"),
            DynkinType::E8 => write!(f, "E_8"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InfType {
    #[serde(rename = "A_inf")]
    AInf,
    #[serde(rename = "A_biinf")]
    ABiinf,
    #[serde(rename = "D_inf")]
    DInf,
}

impl fmt::Display for InfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfType::AInf => "A_inf",
            InfType::ABiinf => "A_biinf",
            InfType::DInf => "D_inf",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuiverClass {
    FiniteDynkin(DynkinType),
    /// Carries the name of the extended diagram, e.g. `Ã_1`.
    FiniteEuclidean(String),
    FiniteWild,
    InfDynkin(InfType),
    InfiniteGeneral,
}

impl fmt::Display for QuiverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverClass::FiniteDynkin(t) => write!(f, "FiniteDynkin({t})"),
            QuiverClass::FiniteEuclidean(_) => write!(f, "FiniteEuclidean"),
            QuiverClass::FiniteWild => write!(f, "FiniteWild"),
            QuiverClass::InfDynkin(t) => write!(f, "InfDynkin({t})"),
            QuiverClass::InfiniteGeneral => write!(f, "InfiniteGeneral"),
        }
    }
}

impl QuiverClass {
    pub fn is_type_a(&self) -> bool {
        matches!(
            self,
            QuiverClass::FiniteDynkin(DynkinType::A(_)) | QuiverClass::InfDynkin(InfType::AInf | InfType::ABiinf)
        )
    }

    /// Finite or infinite Dynkin: indecomposables are determined by dimension vectors.
    pub fn is_dynkin(&self) -> bool {
        matches!(self, QuiverClass::FiniteDynkin(_) | QuiverClass::InfDynkin(_))
    }
}

/// Integer labels for line-shaped quivers (type A) and for D∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    pub core: Vec<i64>,
    pub tail_base: Vec<i64>,
    pub tail_sign: Vec<i64>,
    /// Label bounds of the line (`None` = unbounded). For D∞ these describe the spine.
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub by_label: BTreeMap<i64, usize>,
}

/// Per-tail witness for an eventually constant orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayWitness {
    pub tail: usize,
    pub from_index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathProfile {
    pub has_left_infinite: bool,
    pub has_right_infinite: bool,
    pub left_witnesses: Vec<RayWitness>,
    pub right_witnesses: Vec<RayWitness>,
}

impl PathProfile {
    pub fn has_infinite(&self) -> bool {
        self.has_left_infinite || self.has_right_infinite
    }
}

/// Membership test for Q⁺ plus its connected components.
#[derive(Clone, Debug)]
pub struct QPlus {
    excluded_core: Vec<bool>,
    /// `Tail(t, i)` is excluded for `i ≥ tail_from[t]`.
    tail_from: Vec<Option<u64>>,
    /// `Tail(t, i)` is excluded for `1 ≤ i ≤ tail_upto[t]` (`None` = every index).
    tail_upto: Vec<Option<u64>>,
    pub components: Vec<QPlusComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPlusComponent {
    /// Members inside the analysis window, in vertex order.
    pub vertices: Vec<Vertex>,
    /// Tails whose far end lies in this component (the component is infinite along them).
    pub rays: Vec<usize>,
}

impl QPlus {
    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(c) => !self.excluded_core[c],
            Vertex::Tail(t, i) => {
                let far = self.tail_from[t].is_some_and(|m| i >= m);
                let near = match self.tail_upto[t] {
                    None => true,
                    Some(u) => i <= u,
                };
                !(far || near)
            }
        }
    }

    pub fn component_of(&self, v: Vertex) -> Option<usize> {
        self.components.iter().position(|c| c.vertices.contains(&v))
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// A validated quiver. The scalar field used by every representation
/// computation over this quiver travels with it.
#[derive(Clone, Debug)]
pub struct Quiver {
    field: Field,
    names: Vec<String>,
    arrows: Vec<CoreArrow>,
    tails: Vec<Tail>,
    out_core: Vec<Vec<usize>>,
    in_core: Vec<Vec<usize>>,
    tails_at: Vec<Vec<usize>>,
    class: Option<QuiverClass>,
    labels: Option<LabelMap>,
}

/// Validates a spec: declared endpoints, non-empty periods, acyclic core.
/// Interval-finiteness then holds automatically: a path between two vertices
/// can never leave a tail and come back, so it is confined to the core and the
/// tail segments below its endpoints.
pub fn build_quiver(spec: &QuiverSpec) -> Result<Quiver> {
    build_quiver_with_field(spec, Field::Rational)
}

pub fn build_quiver_with_field(spec: &QuiverSpec, field: Field) -> Result<Quiver> {
    let spec = spec.expanded()?;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for v in &spec.core.vertices {
        if index.contains_key(v) {
            return Err(Error::Parse(format!("duplicate core vertex `{v}`")));
        }
        index.insert(v.clone(), names.len());
        names.push(v.clone());
    }
    let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::DanglingArrow(s.to_string()));
    let mut arrows = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for a in &spec.core.arrows {
        let from = lookup(&a.from)?;
        let to = lookup(&a.to)?;
        let base = a.label.clone().unwrap_or_else(|| format!("{}->{}", a.from, a.to));
        let k = seen.entry(base.clone()).or_insert(0);
        *k += 1;
        let label = if *k == 1 { base } else { format!("{base}#{k}") };
        arrows.push(CoreArrow { from, to, label });
    }
    let mut tails = Vec::new();
    for (t, ts) in spec.tails.iter().enumerate() {
        if ts.period.is_empty() {
            return Err(Error::EmptyPeriod(t));
        }
        let attach = index.get(&ts.attach).copied().ok_or_else(|| Error::DanglingArrow(ts.attach.clone()))?;
        tails.push(Tail {
            attach,
            word: OrientationWord::new(ts.prefix.clone(), ts.period.clone()),
            label_start: ts.label_start,
            label_step: ts.label_step.unwrap_or(1),
        });
    }
    let n = names.len();
    let mut out_core = vec![vec![]; n];
    let mut in_core = vec![vec![]; n];
    for (i, a) in arrows.iter().enumerate() {
        out_core[a.from].push(i);
        in_core[a.to].push(i);
    }
    let mut tails_at = vec![vec![]; n];
    for (t, tl) in tails.iter().enumerate() {
        tails_at[tl.attach].push(t);
    }
    let mut q = Quiver { field, names, arrows, tails, out_core, in_core, tails_at, class: None, labels: None };
    if let Some(cycle) = q.find_core_cycle() {
        return Err(Error::CoreCycle(cycle.into_iter().map(|c| q.names[c].clone()).collect()));
    }
    if q.is_connected() {
        let (class, labels) = classify_graph(&q);
        q.class = Some(class);
        q.labels = labels;
    }
    Ok(q)
}

impl Quiver {
    pub fn from_json(s: &str) -> Result<Quiver> {
        build_quiver(&QuiverSpec::from_json(s)?)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn with_field(&self, field: Field) -> Quiver {
        Quiver { field, ..self.clone() }
    }

    pub fn core_len(&self) -> usize {
        self.names.len()
    }

    pub fn core_name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn core_arrows(&self) -> &[CoreArrow] {
        &self.arrows
    }

    pub fn tails(&self) -> &[Tail] {
        &self.tails
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn labels(&self) -> Option<&LabelMap> {
        self.labels.as_ref()
    }

    /// Re-serialises the quiver as an explicit spec.
    pub fn to_spec(&self) -> QuiverSpec {
        QuiverSpec {
            core: CoreSpec {
                vertices: self.names.clone(),
                arrows: self
                    .arrows
                    .iter()
                    .map(|a| ArrowSpec {
                        from: self.names[a.from].clone(),
                        to: self.names[a.to].clone(),
                        label: Some(a.label.clone()),
                    })
                    .collect(),
            },
            tails: self
                .tails
                .iter()
                .map(|t| TailSpec {
                    attach: self.names[t.attach].clone(),
                    prefix: t.word.prefix.clone(),
                    period: t.word.period.clone(),
                    label_start: t.label_start,
                    label_step: t.label_start.map(|_| t.label_step),
                })
                .collect(),
            shorthand: None,
        }
    }

    /// Tail vertex `i` of tail `t`, with 0 meaning the attach point.
    pub fn tail_vertex(&self, t: usize, i: u64) -> Vertex {
        if i == 0 {
            Vertex::Core(self.tails[t].attach)
        } else {
            Vertex::Tail(t, i)
        }
    }

    pub fn source(&self, a: Arrow) -> Vertex {
        match a {
            Arrow::Core(i) => Vertex::Core(self.arrows[i].from),
            Arrow::Tail(t, n) => match self.tails[t].word.letter(n) {
                Dir::Out => self.tail_vertex(t, n),
                Dir::In => self.tail_vertex(t, n + 1),
            },
        }
    }

    pub fn target(&self, a: Arrow) -> Vertex {
        match a {
            Arrow::Core(i) => Vertex::Core(self.arrows[i].to),
            Arrow::Tail(t, n) => match self.tails[t].word.letter(n) {
                Dir::Out => self.tail_vertex(t, n + 1),
                Dir::In => self.tail_vertex(t, n),
            },
        }
    }

    /// All arrows incident to `v`, in a fixed order.
    pub fn incident(&self, v: Vertex) -> Vec<Arrow> {
        match v {
            Vertex::Core(c) => {
                let mut out: Vec<Arrow> = self.out_core[c].iter().map(|&i| Arrow::Core(i)).collect();
                out.extend(self.in_core[c].iter().map(|&i| Arrow::Core(i)));
                out.extend(self.tails_at[c].iter().map(|&t| Arrow::Tail(t, 0)));
                out
            }
            Vertex::Tail(t, i) => vec![Arrow::Tail(t, i - 1), Arrow::Tail(t, i)],
        }
    }

    pub fn out_arrows(&self, v: Vertex) -> Vec<Arrow> {
        self.incident(v).into_iter().filter(|&a| self.source(a) == v).collect()
    }

    pub fn in_arrows(&self, v: Vertex) -> Vec<Arrow> {
        self.incident(v).into_iter().filter(|&a| self.target(a) == v).collect()
    }

    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        self.incident(v)
            .into_iter()
            .map(|a| if self.source(a) == v { self.target(a) } else { self.source(a) })
            .collect()
    }

    pub fn arrow_label(&self, a: Arrow) -> String {
        match a {
            Arrow::Core(i) => self.arrows[i].label.clone(),
            Arrow::Tail(..) => format!("{}->{}", self.vertex_name(self.source(a)), self.vertex_name(self.target(a))),
        }
    }

    /// Integer label of a vertex on canonical line / D∞ quivers.
    pub fn label_of(&self, v: Vertex) -> Option<i64> {
        let lm = self.labels.as_ref()?;
        Some(match v {
            Vertex::Core(c) => lm.core[c],
            Vertex::Tail(t, i) => lm.tail_base[t] + lm.tail_sign[t] * i as i64,
        })
    }

    pub fn vertex_at(&self, label: i64) -> Option<Vertex> {
        let lm = self.labels.as_ref()?;
        if let Some(&c) = lm.by_label.get(&label) {
            return Some(Vertex::Core(c));
        }
        for t in 0..self.tails.len() {
            let d = (label - lm.tail_base[t]) * lm.tail_sign[t];
            if d > 0 {
                return Some(Vertex::Tail(t, d as u64));
            }
        }
        None
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        if let Some(l) = self.label_of(v) {
            return l.to_string();
        }
        match v {
            Vertex::Core(c) => self.names[c].clone(),
            Vertex::Tail(t, i) => match self.tails[t].label_start {
                Some(s) => (s + (i as i64 - 1) * self.tails[t].label_step).to_string(),
                None => format!("t{t}_{i}"),
            },
        }
    }

    pub fn parse_vertex(&self, s: &str) -> Result<Vertex> {
        let s = s.trim();
        let unknown = || Error::UnknownVertex(s.to_string());
        if let Ok(l) = s.parse::<i64>() {
            if self.labels.is_some() {
                return self.vertex_at(l).ok_or_else(unknown);
            }
        }
        if let Some(c) = self.names.iter().position(|n| n == s) {
            return Ok(Vertex::Core(c));
        }
        if let Ok(l) = s.parse::<i64>() {
            for (t, tl) in self.tails.iter().enumerate() {
                if let Some(st) = tl.label_start {
                    let d = l - st;
                    if tl.label_step != 0 && d % tl.label_step == 0 && d / tl.label_step >= 0 {
                        return Ok(Vertex::Tail(t, (d / tl.label_step) as u64 + 1));
                    }
                }
            }
        }
        if let Some(rest) = s.strip_prefix('t') {
            if let Some((a, b)) = rest.split_once('_') {
                if let (Ok(t), Ok(i)) = (a.parse::<usize>(), b.parse::<u64>()) {
                    if t < self.tails.len() && i >= 1 {
                        return Ok(Vertex::Tail(t, i));
                    }
                }
            }
        }
        Err(unknown())
    }

    fn find_core_cycle(&self) -> Option<Vec<usize>> {
        let n = self.names.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<usize> = Vec::new();
        fn dfs(q: &Quiver, v: usize, state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for &a in &q.out_core[v] {
                let w = q.arrows[a].to;
                if state[w] == 1 {
                    let pos = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[pos..].to_vec());
                }
                if state[w] == 0 {
                    if let Some(c) = dfs(q, w, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        (0..n).find_map(|v| if state[v] == 0 { dfs(self, v, &mut state, &mut stack) } else { None })
    }

    fn is_connected(&self) -> bool {
        let n = self.names.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &a in self.out_core[v].iter().chain(&self.in_core[v]) {
                for w in [self.arrows[a].from, self.arrows[a].to] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn classify(&self) -> Result<QuiverClass> {
        self.class.clone().ok_or(Error::Disconnected)
    }

    pub fn require_connected(&self) -> Result<()> {
        self.classify().map(|_| ())
    }

    pub fn infinite_path_profile(&self) -> PathProfile {
        let mut p = PathProfile {
            has_left_infinite: false,
            has_right_infinite: false,
            left_witnesses: vec![],
            right_witnesses: vec![],
        };
        for (t, tl) in self.tails.iter().enumerate() {
            if let Some((d, m)) = tl.word.constant_from() {
                let w = RayWitness { tail: t, from_index: m };
                match d {
                    Dir::Out => {
                        p.has_right_infinite = true;
                        p.right_witnesses.push(w);
                    }
                    Dir::In => {
                        p.has_left_infinite = true;
                        p.left_witnesses.push(w);
                    }
                }
            }
        }
        p
    }

    /// Default per-tail analysis depth: past the prefix by two full periods.
    pub fn settled_depth(&self, t: usize) -> u64 {
        let w = &self.tails[t].word;
        w.prefix_len() + 2 * w.period_len() + 2
    }

    pub fn q_plus(&self) -> QPlus {
        let n = self.names.len();
        let mut tail_from = vec![None; self.tails.len()];
        let mut excluded_core = vec![false; n];
        let mut stack = Vec::new();
        for (t, tl) in self.tails.iter().enumerate() {
            if let Some((Dir::In, m)) = tl.word.constant_from() {
                tail_from[t] = Some(m.max(1));
                if m == 0 && !excluded_core[tl.attach] {
                    excluded_core[tl.attach] = true;
                    stack.push(tl.attach);
                }
            }
        }
        while let Some(v) = stack.pop() {
            for &a in &self.out_core[v] {
                let w = self.arrows[a].to;
                if !excluded_core[w] {
                    excluded_core[w] = true;
                    stack.push(w);
                }
            }
        }
        let tail_upto: Vec<Option<u64>> = self
            .tails
            .iter()
            .map(|tl| if excluded_core[tl.attach] { tl.word.leading(Dir::Out) } else { Some(0) })
            .collect();
        let mut qp = QPlus { excluded_core, tail_from, tail_upto, components: vec![] };
        // Components: flood fill inside a window deep enough to see every verdict.
        let depths: Vec<u64> = (0..self.tails.len())
            .map(|t| {
                let mut d = self.settled_depth(t);
                if let Some(m) = qp.tail_from[t] {
                    d = d.max(m + 1);
                }
                if let Some(u) = qp.tail_upto[t] {
                    d = d.max(u + 2);
                }
                d
            })
            .collect();
        let win = Window { depths: depths.clone() };
        let verts: Vec<Vertex> = win.vertices(self).into_iter().filter(|&v| qp.contains(v)).collect();
        let mut comp_of: HashMap<Vertex, usize> = HashMap::new();
        let mut comps: Vec<QPlusComponent> = Vec::new();
        for &s in &verts {
            if comp_of.contains_key(&s) {
                continue;
            }
            let id = comps.len();
            let mut members = vec![];
            let mut queue = VecDeque::from([s]);
            comp_of.insert(s, id);
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for w in self.neighbours(v) {
                    if win.contains(w) && qp.contains(w) && !comp_of.contains_key(&w) {
                        comp_of.insert(w, id);
                        queue.push_back(w);
                    }
                }
            }
            members.sort();
            comps.push(QPlusComponent { vertices: members, rays: vec![] });
        }
        for (t, &d) in depths.iter().enumerate() {
            let far = Vertex::Tail(t, d);
            if qp.contains(far) {
                if let Some(&c) = comp_of.get(&far) {
                    comps[c].rays.push(t);
                }
            }
        }
        qp.components = comps;
        qp
    }

    /// Reverses every arrow; tail words are flipped letterwise.
    pub fn opposite(&self) -> Quiver {
        let arrows: Vec<CoreArrow> =
            self.arrows.iter().map(|a| CoreArrow { from: a.to, to: a.from, label: a.label.clone() }).collect();
        let tails: Vec<Tail> = self.tails.iter().map(|t| Tail { word: t.word.flipped(), ..t.clone() }).collect();
        Quiver { out_core: self.in_core.clone(), in_core: self.out_core.clone(), arrows, tails, ..self.clone() }
    }

    /// The full finite set `Q(x, y)`, ordered by (length, arrow labels).
    pub fn paths_between(&self, x: Vertex, y: Vertex) -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.paths_dfs(x, y, &mut cur, &mut out);
        let mut keyed: Vec<(usize, Vec<String>, Path)> = out
            .into_iter()
            .map(|arrows: Vec<Arrow>| {
                let labels = arrows.iter().map(|&a| self.arrow_label(a)).collect();
                (arrows.len(), labels, Path { source: x, target: y, arrows })
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        keyed.into_iter().map(|k| k.2).collect()
    }

    fn paths_dfs(&self, v: Vertex, y: Vertex, cur: &mut Vec<Arrow>, out: &mut Vec<Vec<Arrow>>) {
        if v == y {
            out.push(cur.clone());
            return;
        }
        for a in self.out_arrows(v) {
            let w = self.target(a);
            if !self.may_lead_to(v, w, y) {
                continue;
            }
            cur.push(a);
            self.paths_dfs(w, y, cur, out);
            cur.pop();
        }
    }

    /// Pruning rule: stepping outward on a tail is only useful when the target
    /// lies further out on the same tail.
    fn may_lead_to(&self, v: Vertex, w: Vertex, y: Vertex) -> bool {
        match w {
            Vertex::Core(_) => true,
            Vertex::Tail(t, i) => {
                let outward = match v {
                    Vertex::Tail(_, j) => i > j,
                    Vertex::Core(_) => true,
                };
                !outward || matches!(y, Vertex::Tail(s, j) if s == t && j >= i)
            }
        }
    }

    pub fn path_count(&self, x: Vertex, y: Vertex) -> usize {
        let mut memo = HashMap::new();
        self.count_dfs(x, y, &mut memo)
    }

    fn count_dfs(&self, v: Vertex, y: Vertex, memo: &mut HashMap<Vertex, usize>) -> usize {
        if v == y {
            return 1;
        }
        if let Some(&c) = memo.get(&v) {
            return c;
        }
        let mut total = 0;
        for a in self.out_arrows(v) {
            let w = self.target(a);
            if self.may_lead_to(v, w, y) {
                total += self.count_dfs(w, y, memo);
            }
        }
        memo.insert(v, total);
        total
    }

    /// Whether the quiver, as a whole, is a single path (all arrows chained):
    /// a left infinite path `⋯→2→1→0` or a double infinite path.
    pub fn is_single_path(&self) -> Option<&'static str> {
        let class = self.class.as_ref()?;
        if !matches!(class, QuiverClass::InfDynkin(InfType::AInf | InfType::ABiinf)) {
            return None;
        }
        // Every vertex has in- and out-degree ≤ 1.
        let win =
            Window::uniform(self, self.tails.iter().enumerate().map(|(t, _)| self.settled_depth(t)).max().unwrap_or(0));
        for v in win.vertices(self) {
            if self.out_arrows(v).len() > 1 || self.in_arrows(v).len() > 1 {
                return None;
            }
        }
        let prof = self.infinite_path_profile();
        match class {
            QuiverClass::InfDynkin(InfType::AInf) if prof.has_left_infinite => Some("left infinite path"),
            QuiverClass::InfDynkin(InfType::ABiinf) => Some("double infinite path"),
            _ => None,
        }
    }
}

/// A finite truncation: the whole core plus `Tail(t, i)` for `i ≤ depths[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Window {
    pub depths: Vec<u64>,
}

impl Window {
    pub fn uniform(q: &Quiver, d: u64) -> Window {
        Window { depths: vec![d; q.tails.len()] }
    }

    pub fn core_only(q: &Quiver) -> Window {
        Window::uniform(q, 0)
    }

    /// Smallest window containing `vs` (and the core), padded by `margin`.
    pub fn covering(q: &Quiver, vs: &[Vertex], margin: u64) -> Window {
        let mut depths = vec![0u64; q.tails.len()];
        for &v in vs {
            if let Vertex::Tail(t, i) = v {
                depths[t] = depths[t].max(i);
            }
        }
        for d in depths.iter_mut() {
            *d += margin;
        }
        Window { depths }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(_) => true,
            Vertex::Tail(t, i) => i <= self.depths[t],
        }
    }

    pub fn includes(&self, other: &Window) -> bool {
        self.depths.iter().zip(&other.depths).all(|(a, b)| a >= b)
    }

    pub fn union(&self, other: &Window) -> Window {
        Window { depths: self.depths.iter().zip(&other.depths).map(|(a, b)| *a.max(b)).collect() }
    }

    pub fn grow(&self, by: u64) -> Window {
        Window { depths: self.depths.iter().map(|d| d + by).collect() }
    }

    pub fn vertices(&self, q: &Quiver) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..q.core_len()).map(Vertex::Core).collect();
        for (t, &d) in self.depths.iter().enumerate() {
            out.extend((1..=d).map(|i| Vertex::Tail(t, i)));
        }
        out
    }
}

/// Index structure over the full subquiver of a window.
#[derive(Clone, Debug)]
pub struct WinQuiver {
    pub window: Window,
    pub verts: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    /// (arrow, local source, local target)
    pub arrows: Vec<(Arrow, usize, usize)>,
    pub arrow_index: HashMap<Arrow, usize>,
    pub out: Vec<Vec<usize>>,
    pub inn: Vec<Vec<usize>>,
}

impl WinQuiver {
    pub fn new(q: &Quiver, window: &Window) -> WinQuiver {
        let verts = window.vertices(q);
        let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut arrows = Vec::new();
        let mut set = BTreeSet::new();
        for &v in &verts {
            for a in q.incident(v) {
                set.insert(a);
            }
        }
        for a in set {
            if let (Some(&s), Some(&t)) = (index.get(&q.source(a)), index.get(&q.target(a))) {
                arrows.push((a, s, t));
            }
        }
        let mut out = vec![vec![]; verts.len()];
        let mut inn = vec![vec![]; verts.len()];
        for (k, &(_, s, t)) in arrows.iter().enumerate() {
            out[s].push(k);
            inn[t].push(k);
        }
        let arrow_index = arrows.iter().enumerate().map(|(k, &(a, _, _))| (a, k)).collect();
        WinQuiver { window: window.clone(), verts, index, arrows, arrow_index, out, inn }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn idx(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// All paths starting at local vertex `x`, grouped by endpoint; each path is
    /// a list of local arrow indices in traversal order.
    pub fn paths_from(&self, x: usize) -> Vec<Vec<Vec<usize>>> {
        let mut res = vec![vec![]; self.verts.len()];
        let mut cur = Vec::new();
        self.walk_out(x, &mut cur, &mut res);
        res
    }

    fn walk_out(&self, v: usize, cur: &mut Vec<usize>, res: &mut Vec<Vec<Vec<usize>>>) {
        res[v].push(cur.clone());
        for &k in &self.out[v] {
            cur.push(k);
            self.walk_out(self.arrows[k].2, cur, res);
            cur.pop();
        }
    }

    /// All paths ending at local vertex `y`, grouped by starting vertex.
    pub fn paths_to(&self, y: usize) -> Vec<Vec<Vec<usize>>> {
        let mut res = vec![vec![]; self.verts.len()];
        let mut cur = Vec::new();
        self.walk_in(y, &mut cur, &mut res);
        res
    }

    fn walk_in(&self, v: usize, cur: &mut Vec<usize>, res: &mut Vec<Vec<Vec<usize>>>) {
        let mut p = cur.clone();
        p.reverse();
        res[v].push(p);
        for &k in &self.inn[v] {
            cur.push(k);
            self.walk_in(self.arrows[k].1, cur, res);
            cur.pop();
        }
    }

    /// Topological order (sources first).
    pub fn topo(&self) -> Vec<usize> {
        let n = self.verts.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inn[v].len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &k in &self.out[v] {
                let w = self.arrows[k].2;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

// ---------------------------------------------------------------------------
// Classification

struct Graph {
    n: usize,
    /// (neighbour, multiplicity)
    adj: Vec<BTreeMap<usize, usize>>,
    /// number of tails attached at each core vertex
    rays: Vec<usize>,
}

fn core_graph(q: &Quiver) -> Graph {
    let n = q.names.len();
    let mut adj = vec![BTreeMap::new(); n];
    for a in &q.arrows {
        *adj[a.from].entry(a.to).or_insert(0) += 1;
        *adj[a.to].entry(a.from).or_insert(0) += 1;
    }
    let rays = (0..n).map(|c| q.tails_at[c].len()).collect();
    Graph { n, adj, rays }
}

impl Graph {
    fn degree(&self, v: usize) -> usize {
        self.adj[v].values().sum::<usize>() + self.rays[v]
    }

    fn has_multi(&self) -> bool {
        self.adj.iter().any(|m| m.values().any(|&k| k > 1))
    }

    fn edges(&self) -> usize {
        self.adj.iter().map(|m| m.values().sum::<usize>()).sum::<usize>() / 2
    }

    fn is_tree(&self) -> bool {
        !self.has_multi() && self.edges() + 1 == self.n
    }

    /// Arm lengths (in vertices) from a branch vertex; an arm containing a ray is `None`.
    fn arms(&self, b: usize) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::new();
        for &start in self.adj[b].keys() {
            let (mut prev, mut cur, mut len) = (b, start, 1usize);
            let mut infinite = false;
            loop {
                if self.rays[cur] > 0 {
                    infinite = true;
                }
                let next: Vec<usize> = self.adj[cur].keys().copied().filter(|&w| w != prev).collect();
                if next.len() != 1 {
                    break;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
            out.push((start, if infinite { None } else { Some(len) }));
        }
        for _ in 0..self.rays[b] {
            out.push((usize::MAX, None));
        }
        out
    }

    /// Vertex sequence of a path-shaped core starting from `start`.
    fn line_from(&self, start: usize) -> Vec<usize> {
        let mut seq = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next: Vec<usize> = self.adj[cur].keys().copied().filter(|&w| w != prev).collect();
            match next.first() {
                Some(&w) => {
                    prev = cur;
                    cur = w;
                    seq.push(w);
                }
                None => break,
            }
        }
        seq
    }
}

fn classify_graph(q: &Quiver) -> (QuiverClass, Option<LabelMap>) {
    let g = core_graph(q);
    let ntails = q.tails.len();
    let max_deg = (0..g.n).map(|v| g.degree(v)).max().unwrap_or(0);
    if ntails == 0 {
        return (classify_finite(&g), if g.is_tree() && max_deg <= 2 { line_labels(q, &g) } else { None });
    }
    if !g.is_tree() {
        return (QuiverClass::InfiniteGeneral, None);
    }
    if max_deg <= 2 {
        let t = if ntails == 1 { InfType::AInf } else { InfType::ABiinf };
        return (QuiverClass::InfDynkin(t), line_labels(q, &g));
    }
    if ntails == 1 {
        let branch: Vec<usize> = (0..g.n).filter(|&v| g.degree(v) >= 3).collect();
        if branch.len() == 1 && g.degree(branch[0]) == 3 {
            let arms = g.arms(branch[0]);
            let leaves: Vec<usize> = arms.iter().filter(|a| a.1 == Some(1)).map(|a| a.0).collect();
            if leaves.len() == 2 && arms.iter().any(|a| a.1.is_none()) {
                return (QuiverClass::InfDynkin(InfType::DInf), dinf_labels(q, &g, branch[0], &leaves));
            }
        }
    }
    (QuiverClass::InfiniteGeneral, None)
}

fn classify_finite(g: &Graph) -> QuiverClass {
    let n = g.n;
    if g.has_multi() {
        return if n == 2 && g.edges() == 2 {
            QuiverClass::FiniteEuclidean("Ã_1".into())
        } else {
            QuiverClass::FiniteWild
        };
    }
    if !g.is_tree() {
        let cycle = g.edges() == n && (0..n).all(|v| g.degree(v) == 2);
        return if cycle { QuiverClass::FiniteEuclidean(format!("Ã_{}", n - 1)) } else { QuiverClass::FiniteWild };
    }
    let branch: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    match branch.len() {
        0 => QuiverClass::FiniteDynkin(DynkinType::A(n)),
        1 => {
            let b = branch[0];
            let mut arms: Vec<usize> = g.arms(b).iter().map(|a| a.1.unwrap()).collect();
            arms.sort();
            match arms.as_slice() {
                [1, 1, r] => QuiverClass::FiniteDynkin(DynkinType::D(r + 3)),
                [1, 2, 2] => QuiverClass::FiniteDynkin(DynkinType::E6),
                [1, 2, 3] => QuiverClass::FiniteDynkin(DynkinType::E7),
                [1, 2, 4] => QuiverClass::FiniteDynkin(DynkinType::E8),
                [2, 2, 2] => QuiverClass::FiniteEuclidean("Ẽ_6".into()),
                [1, 3, 3] => QuiverClass::FiniteEuclidean("Ẽ_7".into()),
                [1, 2, 5] => QuiverClass::FiniteEuclidean("Ẽ_8".into()),
                [1, 1, 1, 1] => QuiverClass::FiniteEuclidean("D̃_4".into()),
                _ => QuiverClass::FiniteWild,
            }
        }
        2 => {
            let ok =
                branch.iter().all(|&b| g.degree(b) == 3 && g.arms(b).iter().filter(|a| a.1 == Some(1)).count() >= 2);
            if ok {
                QuiverClass::FiniteEuclidean(format!("D̃_{}", n - 1))
            } else {
                QuiverClass::FiniteWild
            }
        }
        _ => QuiverClass::FiniteWild,
    }
}

fn int_names(q: &Quiver, seq: &[usize]) -> Option<Vec<i64>> {
    let vals: Option<Vec<i64>> = seq.iter().map(|&c| q.names[c].parse::<i64>().ok()).collect();
    let vals = vals?;
    vals.windows(2).all(|w| w[1] == w[0] + 1).then_some(vals)
}

fn make_map(
    q: &Quiver,
    core: Vec<i64>,
    tail_base: Vec<i64>,
    tail_sign: Vec<i64>,
    lo: Option<i64>,
    hi: Option<i64>,
) -> LabelMap {
    let by_label = core.iter().enumerate().map(|(c, &l)| (l, c)).collect();
    let _ = q;
    LabelMap { core, tail_base, tail_sign, lo, hi, by_label }
}

fn line_labels(q: &Quiver, g: &Graph) -> Option<LabelMap> {
    let ends: Vec<usize> = (0..g.n).filter(|&v| g.adj[v].len() <= 1).collect();
    let ntails = q.tails.len();
    // Candidate orientations of the core sequence.
    let seq_a = g.line_from(ends[0]);
    let mut seq_b = seq_a.clone();
    seq_b.reverse();
    let attach = |t: usize| q.tails[t].attach;
    // A tail sits at the low end of the sequence iff it attaches to seq[0] and
    // is not the one continuing past seq[last] (single-vertex cores need care).
    let assign = |seq: &[usize]| -> (Vec<i64>, Vec<i64>) {
        let first = seq[0];
        let last = *seq.last().unwrap();
        let mut sign = vec![0i64; ntails];
        match ntails {
            0 => {}
            1 => sign[0] = if attach(0) == last { 1 } else { -1 },
            _ => {
                if first == last {
                    sign[0] = 1;
                    sign[1] = -1;
                } else {
                    for (t, s) in sign.iter_mut().enumerate() {
                        *s = if attach(t) == last { 1 } else { -1 };
                    }
                }
            }
        }
        (seq.iter().map(|&c| c as i64).collect(), sign)
    };
    let valid = |seq: &[usize], sign: &[i64]| -> bool {
        // A∞ must extend to +∞ (canonical ℕ).
        !(ntails == 1 && sign[0] != 1) && !(ntails == 1 && seq.len() > 1 && attach(0) != *seq.last().unwrap())
    };
    let mut chosen: Option<(Vec<usize>, Vec<i64>, Vec<i64>)> = None;
    // Prefer integer names when they are consecutive along the line.
    for seq in [&seq_a, &seq_b] {
        if let Some(vals) = int_names(q, seq) {
            let (_, sign) = assign(seq);
            let two_tail_single = ntails == 2 && seq.len() == 1;
            if valid(seq, &sign) || two_tail_single {
                chosen = Some((seq.clone(), vals, sign));
                break;
            }
        }
    }
    if chosen.is_none() {
        let mut pick = None;
        for seq in [&seq_a, &seq_b] {
            let (_, sign) = assign(seq);
            let ok = match ntails {
                0 => true,
                1 => valid(seq, &sign),
                _ => seq.len() == 1 || attach(1) == seq[0] || attach(0) == *seq.last().unwrap(),
            };
            if ok {
                pick = Some(seq.clone());
                break;
            }
        }
        let seq = pick?;
        let (_, sign) = assign(&seq);
        let start = if ntails == 0 { 1 } else { 0 };
        let vals = (0..seq.len() as i64).map(|k| k + start).collect();
        chosen = Some((seq, vals, sign));
    }
    let (seq, vals, sign) = chosen?;
    let mut core = vec![0i64; g.n];
    for (k, &c) in seq.iter().enumerate() {
        core[c] = vals[k];
    }
    let tail_base: Vec<i64> = (0..ntails).map(|t| core[attach(t)]).collect();
    let lo = if sign.contains(&-1) { None } else { Some(vals[0]) };
    let hi = if sign.contains(&1) { None } else { Some(*vals.last().unwrap()) };
    Some(make_map(q, core, tail_base, sign, lo, hi))
}

fn dinf_labels(q: &Quiver, g: &Graph, b: usize, leaves: &[usize]) -> Option<LabelMap> {
    // Spine: from b through the remaining arm towards the tail.
    let spine_start: Vec<usize> = g.adj[b].keys().copied().filter(|w| !leaves.contains(w)).collect();
    let mut spine = vec![b];
    if let Some(&s) = spine_start.first() {
        let rest = {
            let mut seq = vec![s];
            let mut prev = b;
            let mut cur = s;
            loop {
                let next: Vec<usize> = g.adj[cur].keys().copied().filter(|&w| w != prev).collect();
                match next.first() {
                    Some(&w) => {
                        prev = cur;
                        cur = w;
                        seq.push(w);
                    }
                    None => break,
                }
            }
            seq
        };
        spine.extend(rest);
    }
    let mut core = vec![0i64; g.n];
    let names_ok = {
        let l: Option<Vec<i64>> = leaves.iter().map(|&c| q.names[c].parse().ok()).collect();
        let s = int_names(q, &spine);
        match (l, s) {
            (Some(mut l), Some(s)) => {
                l.sort();
                l == vec![0, 1] && s[0] == 2
            }
            _ => false,
        }
    };
    if names_ok {
        for &c in leaves.iter().chain(&spine) {
            core[c] = q.names[c].parse().unwrap();
        }
    } else {
        let mut lv = leaves.to_vec();
        lv.sort();
        core[lv[0]] = 0;
        core[lv[1]] = 1;
        for (k, &c) in spine.iter().enumerate() {
            core[c] = 2 + k as i64;
        }
    }
    let attach = q.tails[0].attach;
    if attach != *spine.last().unwrap() {
        return None;
    }
    Some(make_map(q, core.clone(), vec![core[attach]], vec![1], Some(2), None))
}
