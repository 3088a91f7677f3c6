//! Windows of Auslander–Reiten components: knitting, shape certificates,
//! the regular-component census and the AR-category capability flags.

use crate::ar::{dtr_window, ending_at, starting_at, trd_window};
use crate::batch::{self, Mode};
use crate::error::{Error, Result};
use crate::hom::{is_indecomposable, is_isomorphic};
use crate::quiver::{Dir, InfType, Quiver, QuiverClass, Vertex, Window};
use crate::rep::{describe, Rep, WindowRep};
use crate::strings::{Line, PathSide};
use serde_json::{json, Value};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Preprojective,
    Preinjective,
    Regular,
    Connecting,
}

impl ComponentKind {
    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Preprojective => "Preprojective",
            ComponentKind::Preinjective => "Preinjective",
            ComponentKind::Regular => "Regular",
            ComponentKind::Connecting => "Connecting",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeTag {
    NQop,
    NminusQop,
    ZQop,
    ZAinf,
    NAinf,
    NminusAinf,
    Wing(usize),
    /// Infinitely many wings of unbounded size.
    WingFamily,
    /// Stable tube of the given rank (finite quivers of Euclidean type).
    Tube(usize),
    Trivial,
    UndeterminedBeyondDepth,
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeTag::NQop => f.write_str("NQop"),
            ShapeTag::NminusQop => f.write_str("NminusQop"),
            ShapeTag::ZQop => f.write_str("ZQop"),
            ShapeTag::ZAinf => f.write_str("ZAinf"),
            ShapeTag::NAinf => f.write_str("NAinf"),
            ShapeTag::NminusAinf => f.write_str("NminusAinf"),
            ShapeTag::Wing(n) => write!(f, "Wing({n})"),
            ShapeTag::WingFamily => f.write_str("Wing"),
            ShapeTag::Tube(r) => write!(f, "Tube({r})"),
            ShapeTag::Trivial => f.write_str("Trivial"),
            ShapeTag::UndeterminedBeyondDepth => f.write_str("UndeterminedBeyondDepth"),
        }
    }
}

/// `τ^power` of the orbit's base cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub orbit: String,
    pub power: i64,
}

impl CellId {
    pub fn new(orbit: impl Into<String>, power: i64) -> CellId {
        CellId { orbit: orbit.into(), power }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.orbit, self.power)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CellFlags {
    pub projective: bool,
    pub injective: bool,
    pub pseudo_projective: bool,
    pub infinite_dimensional: bool,
}

#[derive(Clone, Debug)]
pub struct CellInfo {
    pub name: String,
    pub rep: WindowRep,
    /// `None` = ∞.
    pub dim: Option<usize>,
    pub flags: CellFlags,
    /// Derived shift (connecting windows only).
    pub shift: i64,
}

impl CellInfo {
    fn new(q: &Quiver, rep: WindowRep) -> CellInfo {
        let dim = rep.total_dim();
        CellInfo {
            name: describe(q, &rep),
            flags: CellFlags { infinite_dimensional: dim.is_none(), ..Default::default() },
            dim,
            rep,
            shift: 0,
        }
    }

    /// Replaces a bare dimension-vector name.
    fn or_named(mut self, name: impl FnOnce() -> String) -> CellInfo {
        if self.name.starts_with('X') {
            self.name = name();
        }
        self
    }

    pub fn label(&self) -> String {
        let base = if self.shift == 0 { self.name.clone() } else { format!("{}[{}]", self.name, self.shift) };
        match self.dim {
            Some(d) => format!("{base} ({d})"),
            None => format!("{base} (∞)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComponentWindow {
    pub kind: ComponentKind,
    pub cells: BTreeMap<CellId, CellInfo>,
    /// `(from, to, multiplicity)`.
    pub arrows: Vec<(CellId, CellId, usize)>,
    /// `(X, τX)`.
    pub tau_links: Vec<(CellId, CellId)>,
    pub shape: ShapeTag,
    pub certificate: String,
    /// No cell of the component lies beyond the window.
    pub closed: bool,
}

impl ComponentWindow {
    fn empty(kind: ComponentKind) -> ComponentWindow {
        ComponentWindow {
            kind,
            cells: BTreeMap::new(),
            arrows: vec![],
            tau_links: vec![],
            shape: ShapeTag::UndeterminedBeyondDepth,
            certificate: String::new(),
            closed: false,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.cells.values().map(|c| c.name.clone()).collect()
    }

    /// Cells immediately before `x` (tails of arrows into it).
    pub fn predecessors(&self, x: &CellId) -> Vec<(CellId, usize)> {
        self.arrows.iter().filter(|a| &a.1 == x).map(|a| (a.0.clone(), a.2)).collect()
    }

    pub fn successors(&self, x: &CellId) -> Vec<(CellId, usize)> {
        self.arrows.iter().filter(|a| &a.0 == x).map(|a| (a.1.clone(), a.2)).collect()
    }

    pub fn tau_of(&self, x: &CellId) -> Option<&CellId> {
        self.tau_links.iter().find(|l| &l.0 == x).map(|l| &l.1)
    }

    /// Meshes `τX → ⊕E → X` where every term is in the window and finite:
    /// returns the cells whose additivity `f(τX) + f(X) = Σ f(E)` fails.
    pub fn additivity_violations(&self) -> Vec<CellId> {
        let mut bad = vec![];
        for (x, tx) in &self.tau_links {
            let (Some(cx), Some(ctx)) = (self.cells.get(x), self.cells.get(tx)) else { continue };
            let mids = self.predecessors(x);
            let mut sum = Some(0usize);
            for (m, k) in &mids {
                sum = match (sum, self.cells.get(m).and_then(|c| c.dim)) {
                    (Some(s), Some(d)) => Some(s + k * d),
                    _ => None,
                };
            }
            let lhs = match (cx.dim, ctx.dim) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            if lhs != sum {
                bad.push(x.clone());
            }
        }
        bad
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "shape": self.shape.to_string(),
            "certificate": self.certificate,
            "closed": self.closed,
            "cells": self.cells.iter().map(|(id, c)| json!({
                "id": id.to_string(),
                "name": c.name,
                "shift": c.shift,
                "dim": c.dim.map_or(json!("inf"), |d| json!(d)),
                "projective": c.flags.projective,
                "injective": c.flags.injective,
                "pseudo_projective": c.flags.pseudo_projective,
                "infinite_dimensional": c.flags.infinite_dimensional,
            })).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|(a, b, m)| json!({
                "from": a.to_string(), "to": b.to_string(), "multiplicity": m,
            })).collect::<Vec<_>>(),
            "tau_links": self.tau_links.iter().map(|(a, b)| json!({
                "from": a.to_string(), "to": b.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Graphviz rendering: one solid edge per unit of multiplicity, dashed τ edges.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph component {\n  rankdir=LR;\n  node [shape=box];\n");
        for (id, c) in &self.cells {
            s.push_str(&format!("  \"{id}\" [label=\"{}\"];\n", c.label().replace('"', "\\\"")));
        }
        for (a, b, m) in &self.arrows {
            for _ in 0..*m {
                s.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
            }
        }
        for (a, b) in &self.tau_links {
            s.push_str(&format!("  \"{a}\" -> \"{b}\" [style=dashed, constraint=false];\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// What to knit.
#[derive(Clone, Debug)]
pub enum Seed {
    Preprojective,
    /// Index into `q.q_plus().components`.
    Preinjective(usize),
    Regular(Rep),
}

/// Number of arrows `x → y` for vertices of a finite vertex list.
fn arrow_counts(q: &Quiver, verts: &[Vertex]) -> Vec<(Vertex, Vertex, usize)> {
    let mut out: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
    for &x in verts {
        for a in q.out_arrows(x) {
            let y = q.target(a);
            if verts.contains(&y) {
                *out.entry((x, y)).or_default() += 1;
            }
        }
    }
    out.into_iter().map(|((x, y), k)| (x, y, k)).collect()
}

/// `τ^n` applied to a named base (`n < 0` for `τ⁻`).
fn tau_name(n: i64, base: &str) -> String {
    match n {
        0 => base.to_string(),
        1 => format!("τ{base}"),
        -1 => format!("τ⁻{base}"),
        n => format!("τ^{n}{base}"),
    }
}

fn orbit_window(q: &Quiver, depth: usize) -> Vec<Vertex> {
    Window::uniform(q, depth as u64 + 1).vertices(q)
}

pub fn knit_component(q: &Quiver, seed: &Seed, depth: usize) -> Result<ComponentWindow> {
    knit_component_with(Mode::default(), q, seed, depth)
}

pub fn knit_component_with(mode: Mode, q: &Quiver, seed: &Seed, depth: usize) -> Result<ComponentWindow> {
    q.require_connected()?;
    match seed {
        Seed::Preprojective => knit_preprojective(mode, q, depth),
        Seed::Preinjective(c) => knit_preinjective(mode, q, *c, depth),
        Seed::Regular(m) => knit_regular(q, &m.realize(q)?, depth),
    }
}

/// One τ-orbit of the preprojective component: `τ^{-n} P_x` for `n ≤ depth`,
/// stopping after an injective or infinite-dimensional cell.
fn preprojective_orbit(q: &Quiver, x: Vertex, depth: usize) -> Result<Vec<CellInfo>> {
    let p = Rep::Proj(x).realize(q)?;
    let mut cells = vec![CellInfo::new(q, p)];
    cells[0].flags.projective = true;
    cells[0].name = format!("P({})", q.vertex_name(x));
    for _ in 0..depth {
        let last = cells.last_mut().unwrap();
        if last.flags.infinite_dimensional {
            break;
        }
        let t = trd_window(q, &last.rep)?;
        match t.value {
            None => {
                last.flags.injective = true;
                break;
            }
            Some(v) => {
                let n = cells.len() as i64;
                cells.push(CellInfo::new(q, v).or_named(|| tau_name(-n, &format!("P({})", q.vertex_name(x)))));
            }
        }
    }
    Ok(cells)
}

fn knit_preprojective(mode: Mode, q: &Quiver, depth: usize) -> Result<ComponentWindow> {
    let verts = orbit_window(q, depth);
    let orbits = batch::try_map_with(mode, &verts, |&x| preprojective_orbit(q, x, depth))?;
    let mut w = ComponentWindow::empty(ComponentKind::Preprojective);
    for (x, cells) in verts.iter().zip(orbits) {
        let orbit = format!("P{}", q.vertex_name(*x));
        for (n, c) in cells.into_iter().enumerate() {
            w.cells.insert(CellId::new(&orbit, -(n as i64)), c);
        }
    }
    // ℕQ^op: for α: x → y, arrows (n, y) → (n, x) and (n, x) → (n+1, y).
    for (x, y, k) in arrow_counts(q, &verts) {
        let (ox, oy) = (format!("P{}", q.vertex_name(x)), format!("P{}", q.vertex_name(y)));
        for n in 0..=depth as i64 {
            let (yn, xn, yn1) = (CellId::new(&oy, -n), CellId::new(&ox, -n), CellId::new(&oy, -n - 1));
            if w.cells.contains_key(&yn) && w.cells.contains_key(&xn) {
                w.arrows.push((yn, xn.clone(), k));
            }
            if w.cells.contains_key(&xn) && w.cells.contains_key(&yn1) {
                w.arrows.push((xn, yn1, k));
            }
        }
    }
    add_orbit_links(&mut w);
    let prof = q.infinite_path_profile();
    w.closed = q.is_finite() && orbits_end(&w, |c| c.flags.injective);
    if !prof.has_right_infinite {
        w.shape = ShapeTag::NQop;
        w.certificate = if q.is_finite() {
            format!("finite quiver: {} cells, every orbit ends at an injective", w.len())
        } else {
            "no right infinite path: right stable, full shape NQop".into()
        };
    } else {
        let bound =
            w.cells.iter().filter(|(_, c)| c.flags.infinite_dimensional).map(|(id, _)| -id.power).max().unwrap_or(0);
        w.shape = ShapeTag::NQop;
        w.certificate =
            format!("right infinite paths: proper full subquiver of NQop, infinite cells up to τ-depth {bound}");
    }
    Ok(w)
}

/// One τ-orbit of a preinjective component: `τ^n I_x` while finite dimensional.
fn preinjective_orbit(q: &Quiver, x: Vertex, depth: usize) -> Result<Vec<CellInfo>> {
    let i = Rep::Inj(x).realize(q)?;
    let mut cells = vec![CellInfo::new(q, i)];
    cells[0].flags.injective = true;
    cells[0].name = format!("I({})", q.vertex_name(x));
    for _ in 0..depth {
        let last = cells.last_mut().unwrap();
        let t = dtr_window(q, &last.rep)?;
        match t.value {
            None => {
                last.flags.projective = true;
                break;
            }
            Some(v) if !v.is_finite_dim() => {
                last.flags.pseudo_projective = true;
                break;
            }
            Some(v) => {
                let n = cells.len() as i64;
                cells.push(CellInfo::new(q, v).or_named(|| tau_name(n, &format!("I({})", q.vertex_name(x)))));
            }
        }
    }
    Ok(cells)
}

fn knit_preinjective(mode: Mode, q: &Quiver, comp: usize, depth: usize) -> Result<ComponentWindow> {
    let qp = q.q_plus();
    let c = qp.components.get(comp).ok_or_else(|| Error::BadSeed(format!("no Q+ component {comp}")))?;
    let win = Window::uniform(q, depth as u64 + 1);
    let verts: Vec<Vertex> = c.vertices.iter().copied().filter(|&v| win.contains(v)).collect();
    let orbits = batch::try_map_with(mode, &verts, |&x| preinjective_orbit(q, x, depth))?;
    let mut w = ComponentWindow::empty(ComponentKind::Preinjective);
    for (x, cells) in verts.iter().zip(orbits) {
        let orbit = format!("I{}", q.vertex_name(*x));
        for (n, c) in cells.into_iter().enumerate() {
            w.cells.insert(CellId::new(&orbit, n as i64), c);
        }
    }
    // ℕ⁻Q^op: for α: x → y, arrows τ^n I_y → τ^n I_x and τ^{n+1} I_x → τ^n I_y.
    for (x, y, k) in arrow_counts(q, &verts) {
        let (ox, oy) = (format!("I{}", q.vertex_name(x)), format!("I{}", q.vertex_name(y)));
        for n in 0..=depth as i64 {
            let (yn, xn, xn1) = (CellId::new(&oy, n), CellId::new(&ox, n), CellId::new(&ox, n + 1));
            if w.cells.contains_key(&yn) && w.cells.contains_key(&xn) {
                w.arrows.push((yn.clone(), xn, k));
            }
            if w.cells.contains_key(&xn1) && w.cells.contains_key(&yn) {
                w.arrows.push((xn1, yn, k));
            }
        }
    }
    w.arrows.sort();
    add_orbit_links(&mut w);
    w.closed = c.rays.is_empty() && orbits_end(&w, |c| c.flags.projective || c.flags.pseudo_projective);
    let prof = q.infinite_path_profile();
    if w.len() == 1 {
        w.shape = ShapeTag::Trivial;
        w.certificate = "single pseudo-projective injective".into();
    } else if !prof.has_left_infinite {
        w.shape = ShapeTag::NminusQop;
        w.certificate = "no left infinite path: left stable, full shape NminusQop".into();
    } else {
        w.shape = ShapeTag::NminusQop;
        w.certificate = format!(
            "left infinite paths: finite τ-orbits, {} cells{}",
            w.len(),
            if w.closed { ", closed" } else { "" }
        );
    }
    Ok(w)
}

/// Whether the last cell of every τ-orbit satisfies `stop`.
fn orbits_end(w: &ComponentWindow, stop: impl Fn(&CellInfo) -> bool) -> bool {
    let mut last: BTreeMap<&str, (i64, &CellInfo)> = BTreeMap::new();
    for (id, c) in &w.cells {
        let e = last.entry(id.orbit.as_str()).or_insert((id.power.abs(), c));
        if id.power.abs() > e.0 {
            *e = (id.power.abs(), c);
        }
    }
    last.values().all(|(_, c)| stop(c))
}

fn add_orbit_links(w: &mut ComponentWindow) {
    let ids: Vec<CellId> = w.cells.keys().cloned().collect();
    for id in ids {
        let t = CellId::new(&id.orbit, id.power + 1);
        if w.cells.contains_key(&t) {
            w.tau_links.push((id, t));
        }
    }
}

/// Group isomorphic summands: `(rep, multiplicity)`.
fn group(q: &Quiver, parts: Vec<WindowRep>) -> Result<Vec<(WindowRep, usize)>> {
    let mut out: Vec<(WindowRep, usize)> = vec![];
    'next: for p in parts {
        for (r, k) in out.iter_mut() {
            if same_iso(q, r, &p)? {
                *k += 1;
                continue 'next;
            }
        }
        out.push((p, 1));
    }
    Ok(out)
}

fn same_iso(q: &Quiver, a: &WindowRep, b: &WindowRep) -> Result<bool> {
    let (da, db) = (a.dim_vector(), b.dim_vector());
    if da.stable != db.stable || !da.values.keys().chain(db.values.keys()).all(|&v| da.at(v) == db.at(v)) {
        return Ok(false);
    }
    is_isomorphic(q, &Rep::Window(a.clone()), &Rep::Window(b.clone()))
}

/// Cells by index during a breadth-first knit; orbits are named afterwards.
struct Knit<'a> {
    q: &'a Quiver,
    cells: Vec<CellInfo>,
    /// `(x, τx)`.
    tau: Vec<(usize, usize)>,
    arrows: Vec<(usize, usize, usize)>,
}

impl Knit<'_> {
    fn intern(&mut self, m: WindowRep) -> Result<(usize, bool)> {
        for (i, c) in self.cells.iter().enumerate() {
            if same_iso(self.q, &c.rep, &m)? {
                return Ok((i, false));
            }
        }
        self.cells.push(CellInfo::new(self.q, m));
        Ok((self.cells.len() - 1, true))
    }

    fn arrow(&mut self, a: usize, b: usize, k: usize) {
        if !self.arrows.iter().any(|x| x.0 == a && x.1 == b) {
            self.arrows.push((a, b, k));
        }
    }

    fn tau_link(&mut self, x: usize, tx: usize) {
        if !self.tau.contains(&(x, tx)) {
            self.tau.push((x, tx));
        }
    }

    /// Names orbits `R0, R1, …` in discovery order; powers count τ-steps from
    /// the first-discovered cell of the orbit.
    fn finish(self, kind: ComponentKind) -> ComponentWindow {
        let n = self.cells.len();
        let mut ids: Vec<Option<CellId>> = vec![None; n];
        let mut orbit = 0;
        for start in 0..n {
            if ids[start].is_some() {
                continue;
            }
            let name = format!("R{orbit}");
            orbit += 1;
            ids[start] = Some(CellId::new(&name, 0));
            let mut stack = vec![(start, 0i64)];
            while let Some((x, p)) = stack.pop() {
                for &(a, b) in &self.tau {
                    let next = if a == x {
                        Some((b, p + 1))
                    } else if b == x {
                        Some((a, p - 1))
                    } else {
                        None
                    };
                    if let Some((y, py)) = next {
                        if ids[y].is_none() {
                            ids[y] = Some(CellId::new(&name, py));
                            stack.push((y, py));
                        }
                    }
                }
            }
        }
        let ids: Vec<CellId> = ids.into_iter().map(Option::unwrap).collect();
        let mut w = ComponentWindow::empty(kind);
        for (i, c) in self.cells.into_iter().enumerate() {
            w.cells.insert(ids[i].clone(), c);
        }
        w.arrows = self.arrows.iter().map(|&(a, b, k)| (ids[a].clone(), ids[b].clone(), k)).collect();
        w.tau_links = self.tau.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone())).collect();
        w.arrows.sort();
        w.tau_links.sort();
        w
    }
}

fn knit_regular(q: &Quiver, m: &WindowRep, depth: usize) -> Result<ComponentWindow> {
    if !is_indecomposable(q, m)? {
        return Err(Error::NotIndecomposable);
    }
    let mut k = Knit { q, cells: vec![], tau: vec![], arrows: vec![] };
    k.intern(m.clone())?;
    let mut dist = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let mut open = false;
    while let Some(x) = queue.pop_front() {
        if dist[x] >= depth {
            open = true;
            continue;
        }
        let mut found = vec![];
        let rep = k.cells[x].rep.clone();
        match dtr_window(q, &rep)?.value {
            None => k.cells[x].flags.projective = true,
            Some(v) if !v.is_finite_dim() => k.cells[x].flags.pseudo_projective = true,
            Some(_) => {
                let s = ending_at(q, &rep)?;
                let (t, _) = k.intern(s.left)?;
                k.tau_link(x, t);
                found.push(t);
                for (mid, mult) in group(q, s.middle)? {
                    let (e, _) = k.intern(mid)?;
                    k.arrow(t, e, mult);
                    k.arrow(e, x, mult);
                    found.push(e);
                }
            }
        }
        if rep.is_finite_dim() {
            match trd_window(q, &rep)?.value {
                None => k.cells[x].flags.injective = true,
                Some(_) => {
                    let s = starting_at(q, &rep)?;
                    let (t, _) = k.intern(s.right)?;
                    k.tau_link(t, x);
                    found.push(t);
                    for (mid, mult) in group(q, s.middle)? {
                        let (e, _) = k.intern(mid)?;
                        k.arrow(x, e, mult);
                        k.arrow(e, t, mult);
                        found.push(e);
                    }
                }
            }
        }
        for f in found {
            if f >= dist.len() {
                dist.resize(f + 1, usize::MAX);
            }
            if dist[f] == usize::MAX {
                dist[f] = dist[x] + 1;
                queue.push_back(f);
            }
        }
    }
    let mut w = k.finish(ComponentKind::Regular);
    w.closed = !open;
    Ok(w)
}

/// Shape of the component containing `m`.
#[derive(Clone, Debug)]
pub struct ShapeResult {
    pub kind: ComponentKind,
    pub shape: ShapeTag,
    pub certificate: String,
    pub window: Option<ComponentWindow>,
}

impl ShapeResult {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "shape": self.shape.to_string(),
            "certificate": self.certificate,
            "cells": self.window.as_ref().map(|w| w.len()),
        })
    }
}

pub fn component_shape(q: &Quiver, m: &Rep, depth: usize) -> Result<ShapeResult> {
    let w0 = m.realize(q)?;
    if !is_indecomposable(q, &w0)? {
        return Err(Error::NotIndecomposable);
    }
    // (a) τ / τ⁻ iteration.
    let mut cur = w0.clone();
    for n in 0..=depth {
        match dtr_window(q, &cur)?.value {
            None => {
                return Ok(ShapeResult {
                    kind: ComponentKind::Preprojective,
                    shape: ShapeTag::NQop,
                    certificate: format!("τ^{n} M is projective"),
                    window: None,
                })
            }
            Some(v) if v.is_finite_dim() => cur = v,
            Some(_) => break,
        }
    }
    let mut cur = w0.clone();
    for n in 0..=depth {
        if !cur.is_finite_dim() {
            break;
        }
        match trd_window(q, &cur)?.value {
            None => {
                return Ok(ShapeResult {
                    kind: ComponentKind::Preinjective,
                    shape: ShapeTag::NminusQop,
                    certificate: format!("τ^-{n} M is injective"),
                    window: None,
                });
            }
            Some(v) => cur = v,
        }
    }
    // (b) regular: knit and look for boundary cells.
    let w = knit_regular(q, &w0, depth)?;
    let has_inf = w.cells.values().any(|c| c.flags.infinite_dimensional);
    let has_pseudo = w.cells.values().any(|c| c.flags.pseudo_projective);
    let n = w.len();
    let (shape, cert) = match (has_inf, has_pseudo) {
        (true, true) if w.closed => {
            let k = wing_rank(n);
            match k {
                Some(1) => {
                    (ShapeTag::Trivial, "single infinite-dimensional pseudo-projective cell: Wing(1)".to_string())
                }
                Some(k) => {
                    (ShapeTag::Wing(k), format!("closed, {n} cells, infinite-dimensional and pseudo-projective cells"))
                }
                None => (ShapeTag::UndeterminedBeyondDepth, format!("closed with {n} cells, not a wing")),
            }
        }
        (true, true) => (ShapeTag::UndeterminedBeyondDepth, "wing not closed within depth".to_string()),
        (true, false) => (ShapeTag::NminusAinf, "infinite-dimensional cell, no pseudo-projective".to_string()),
        (false, true) => (ShapeTag::NAinf, "pseudo-projective cell, no infinite-dimensional".to_string()),
        (false, false) => stable_shape(q, &w)?,
    };
    Ok(ShapeResult { kind: ComponentKind::Regular, shape, certificate: cert, window: Some(w) })
}

fn wing_rank(n: usize) -> Option<usize> {
    (1..=n).find(|k| k * (k + 1) / 2 == n)
}

/// No boundary cell in the window: decide from quiver-level results.
fn stable_shape(q: &Quiver, w: &ComponentWindow) -> Result<(ShapeTag, String)> {
    // Periodic orbit: a tube.
    if let Some((x, _)) = w.tau_links.iter().find(|(a, b)| a.orbit == b.orbit && b.power <= a.power) {
        let rank = w.cells.keys().filter(|id| id.orbit == x.orbit).count();
        return Ok((ShapeTag::Tube(rank), "τ-periodic orbit".into()));
    }
    let class = q.classify()?;
    let prof = q.infinite_path_profile();
    if !prof.has_infinite() && !q.is_finite() {
        return Ok((ShapeTag::ZAinf, "no infinite path: every regular component is ZAinf".into()));
    }
    if let QuiverClass::InfDynkin(_) = class {
        let census = regular_census(q)?;
        let mut cands: Vec<ShapeTag> = census.breakdown.iter().map(|b| b.0).collect();
        cands.dedup();
        if !w.closed {
            cands.retain(|s| !matches!(s, ShapeTag::Wing(_)));
        }
        if cands.len() == 1 {
            return Ok((cands[0], format!("census: {}", census.justification)));
        }
        return Ok((ShapeTag::UndeterminedBeyondDepth, format!("no boundary cell within depth; candidates {cands:?}")));
    }
    if class == QuiverClass::FiniteWild {
        return Ok((ShapeTag::ZAinf, "finite wild quiver: regular components are ZAinf".into()));
    }
    Ok((ShapeTag::UndeterminedBeyondDepth, "no boundary cell within depth".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("Infinite"),
        }
    }
}

impl Count {
    fn json(self) -> Value {
        match self {
            Count::Finite(n) => json!(n),
            Count::Infinite => json!("Infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub regular_count: Count,
    pub breakdown: Vec<(ShapeTag, Count)>,
    pub justification: String,
}

impl Census {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "regular": self.regular_count.json(),
            "breakdown": self.breakdown.iter().map(|(s, c)| json!({"shape": s.to_string(), "count": c.json()})).collect::<Vec<_>>(),
            "justification": self.justification,
        });
        if self.breakdown.len() == 1 {
            v["shape"] = json!(self.breakdown[0].0.to_string());
        }
        v
    }
}

fn tally(shapes: &[ShapeTag]) -> Vec<(ShapeTag, Count)> {
    let mut out: Vec<(ShapeTag, Count)> = vec![];
    for &s in shapes {
        match out.iter_mut().find(|e| e.0 == s) {
            Some((_, Count::Finite(n))) => *n += 1,
            _ => out.push((s, Count::Finite(1))),
        }
    }
    out
}

/// Number of members of a system, `None` when infinite.
fn system_size(line: &Line, side: PathSide, span: (i64, i64)) -> Option<usize> {
    let starts: Vec<i64> = (span.0..=span.1).filter(|&x| line.member_at(side, x).is_some()).collect();
    let (Some(&first), Some(&last)) = (starts.first(), starts.last()) else { return Some(0) };
    if line.pred_start(side, first).is_some() || line.succ_start(side, last).is_some() {
        return None;
    }
    Some(starts.len())
}

pub fn regular_census(q: &Quiver) -> Result<Census> {
    let class = q.classify()?;
    let prof = q.infinite_path_profile();
    let (count, breakdown, why): (Count, Vec<(ShapeTag, Count)>, &str) = match class {
        QuiverClass::FiniteDynkin(_) => (Count::Finite(0), vec![], "finite Dynkin type: no regular component"),
        QuiverClass::FiniteEuclidean(_) => (
            Count::Infinite,
            vec![(ShapeTag::Tube(1), Count::Infinite)],
            "Euclidean type: infinitely many homogeneous tubes",
        ),
        QuiverClass::FiniteWild => {
            (Count::Infinite, vec![(ShapeTag::ZAinf, Count::Infinite)], "wild type: infinitely many ZAinf components")
        }
        QuiverClass::InfDynkin(InfType::AInf) => (Count::Finite(0), vec![], "A_inf: no regular component"),
        QuiverClass::InfDynkin(InfType::DInf) => {
            let s = if prof.has_left_infinite {
                ShapeTag::NAinf
            } else if prof.has_right_infinite {
                ShapeTag::NminusAinf
            } else {
                ShapeTag::ZAinf
            };
            (Count::Finite(1), vec![(s, Count::Finite(1))], "D_inf: exactly one regular component")
        }
        QuiverClass::InfDynkin(InfType::ABiinf) => {
            let (mut l, mut r) = (0, 0);
            for tl in q.tails() {
                match tl.word.constant_from() {
                    Some((Dir::Out, _)) => r += 1,
                    Some((Dir::In, _)) => l += 1,
                    None => {}
                }
            }
            let shapes: Vec<ShapeTag> = if q.is_single_path().is_some() {
                vec![ShapeTag::ZAinf]
            } else if l == 0 {
                (0..2).map(|k| if k < r { ShapeTag::NminusAinf } else { ShapeTag::ZAinf }).collect()
            } else if r == 0 {
                (0..2).map(|k| if k < l { ShapeTag::NAinf } else { ShapeTag::ZAinf }).collect()
            } else {
                let line = Line::new(q)?;
                let lm = q.labels().unwrap();
                let lo = lm.core.iter().min().copied().unwrap_or(0);
                let hi = lm.core.iter().max().copied().unwrap_or(0);
                let pad = q.tails().iter().enumerate().map(|(t, _)| q.settled_depth(t) as i64).max().unwrap_or(0) + 2;
                let span = (lo - pad, hi + pad);
                let n = system_size(&line, PathSide::L, span).or_else(|| system_size(&line, PathSide::R, span));
                match n {
                    Some(1) => vec![ShapeTag::ZAinf, ShapeTag::Trivial],
                    Some(n) => vec![ShapeTag::ZAinf, ShapeTag::Wing(n)],
                    None => vec![ShapeTag::ZAinf, ShapeTag::UndeterminedBeyondDepth],
                }
            };
            let n = shapes.len();
            (Count::Finite(n), tally(&shapes), "A_inf^inf: orientation case analysis")
        }
        QuiverClass::InfiniteGeneral => {
            let s = match (prof.has_left_infinite, prof.has_right_infinite) {
                (false, false) => ShapeTag::ZAinf,
                (true, false) => ShapeTag::NAinf,
                (false, true) => ShapeTag::NminusAinf,
                (true, true) => ShapeTag::WingFamily,
            };
            (Count::Infinite, vec![(s, Count::Infinite)], "infinite, not Dynkin: shape family by infinite-path profile")
        }
    };
    Ok(Census { regular_count: count, breakdown, justification: why.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub left: bool,
    pub right: bool,
}

impl Capabilities {
    pub fn both(&self) -> bool {
        self.left && self.right
    }
}

/// Whether `rep⁺(Q)` has left / right almost split sequences.
pub fn ar_capabilities(q: &Quiver) -> Result<Capabilities> {
    q.require_connected()?;
    let p = q.infinite_path_profile();
    let left = !p.has_right_infinite;
    let right = !p.has_left_infinite || q.is_single_path().is_some();
    Ok(Capabilities { left, right })
}

impl Capabilities {
    pub fn to_json(&self) -> Value {
        json!({
            "rep_plus_left_AR": self.left,
            "rep_plus_right_AR": self.right,
            "rep_plus_AR": self.both(),
        })
    }
}
