//! Representations.
//!
//! Everything is eventually materialised as a [`WindowRep`]: exact matrices on
//! a finite window, plus for each tail the dimension of the space that
//! continues, with identity maps, beyond the window. Every representation met
//! in practice (projectives, injectives, strings, the D∞ family, translates,
//! middle terms) has this shape once the window passes the point where the
//! tail orientation becomes constant.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::poly::{Irreducibility, Poly};
use crate::quiver::{Arrow, Dir, InfType, Quiver, QuiverClass, Vertex, WinQuiver, Window};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// A representation given exactly on a window, constant beyond it.
///
/// Canonical form: for every tail `t`, the dimension at the last window vertex
/// equals `stable[t]`, and when `stable[t] > 0` the tail orientation is
/// constant from the window boundary on.
#[derive(Clone)]
pub struct WindowRep {
    wq: Arc<WinQuiver>,
    field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
    pub stable: Vec<usize>,
}

impl PartialEq for WindowRep {
    fn eq(&self, o: &Self) -> bool {
        self.wq.window == o.wq.window && self.dims == o.dims && self.maps == o.maps && self.stable == o.stable
    }
}

impl fmt::Debug for WindowRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindowRep")
            .field("window", &self.wq.window.depths)
            .field("dims", &self.dims)
            .field("stable", &self.stable)
            .finish()
    }
}

/// A morphism of window representations on a common window: one matrix per
/// window vertex, in window order.
pub type Morphism = Vec<Matrix>;

/// Deepens `w` so that every eventually constant tail is cut after its
/// orientation has settled.
pub fn settle(q: &Quiver, w: &Window) -> Window {
    let depths = q
        .tails()
        .iter()
        .enumerate()
        .map(|(t, tl)| {
            let mut d = w.depths.get(t).copied().unwrap_or(0).max(1);
            if let Some((_, m)) = tl.word.constant_from() {
                d = d.max(m + 1);
            }
            d
        })
        .collect();
    Window { depths }
}

impl WindowRep {
    pub fn zero(q: &Quiver, w: &Window) -> WindowRep {
        let wq = Arc::new(WinQuiver::new(q, w));
        let f = q.field();
        let maps = wq.arrows.iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        WindowRep { dims: vec![0; wq.len()], maps, stable: vec![0; q.tails().len()], wq, field: f }
    }

    /// Assembles a representation from dimensions and arrow matrices given in
    /// window order; `stable` is read off the boundary.
    pub fn from_parts(q: &Quiver, wq: Arc<WinQuiver>, dims: Vec<usize>, maps: Vec<Matrix>) -> WindowRep {
        let mut r = WindowRep { field: q.field(), dims, maps, stable: vec![], wq };
        r.stable = r.boundary_dims(q);
        r
    }

    fn boundary_dims(&self, q: &Quiver) -> Vec<usize> {
        (0..q.tails().len())
            .map(|t| {
                let d = self.wq.window.depths[t];
                let v = q.tail_vertex(t, d);
                self.dims[self.wq.idx(v).unwrap()]
            })
            .collect()
    }

    pub fn wq(&self) -> &Arc<WinQuiver> {
        &self.wq
    }

    pub fn window(&self) -> &Window {
        &self.wq.window
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, v: Vertex) -> usize {
        match self.wq.idx(v) {
            Some(i) => self.dims[i],
            None => match v {
                Vertex::Tail(t, _) => self.stable[t],
                Vertex::Core(_) => 0,
            },
        }
    }

    /// Total dimension, `None` when infinite.
    pub fn total_dim(&self) -> Option<usize> {
        if self.stable.iter().any(|&s| s > 0) {
            None
        } else {
            Some(self.dims.iter().sum())
        }
    }

    pub fn is_finite_dim(&self) -> bool {
        self.total_dim().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == Some(0)
    }

    pub fn support(&self) -> Vec<Vertex> {
        self.wq.verts.iter().zip(&self.dims).filter(|(_, &d)| d > 0).map(|(&v, _)| v).collect()
    }

    /// Matrix of an arrow; arrows beyond the window act as identities.
    pub fn map(&self, q: &Quiver, a: Arrow) -> Matrix {
        match self.wq.arrow_index.get(&a) {
            Some(&k) => self.maps[k].clone(),
            None => {
                let (s, t) = (self.dim(q.source(a)), self.dim(q.target(a)));
                if s == t {
                    Matrix::identity(self.field, s)
                } else {
                    Matrix::zeros(self.field, t, s)
                }
            }
        }
    }

    /// Composite along a path of local arrow indices (traversal order).
    pub fn path_map(&self, path: &[usize], start: usize) -> Matrix {
        let mut m = Matrix::identity(self.field, self.dims[start]);
        for &k in path {
            m = self.maps[k].mul(&m);
        }
        m
    }

    /// The same representation on a larger (or equal) window.
    pub fn extend(&self, q: &Quiver, w: &Window) -> WindowRep {
        let w = self.window().union(w);
        if &w == self.window() {
            return self.clone();
        }
        let wq = Arc::new(WinQuiver::new(q, &w));
        let dims: Vec<usize> = wq.verts.iter().map(|&v| self.dim(v)).collect();
        let maps = wq.arrows.iter().map(|&(a, _, _)| self.map(q, a)).collect();
        WindowRep { wq, field: self.field, dims, maps, stable: self.stable.clone() }
    }

    /// Brings several representations to one common window.
    pub fn align(q: &Quiver, reps: &[&WindowRep]) -> Vec<WindowRep> {
        let w = reps.iter().fold(Window::core_only(q), |acc, r| acc.union(r.window()));
        reps.iter().map(|r| r.extend(q, &w)).collect()
    }

    /// Whether the stored boundary data is consistent with the canonical form.
    pub fn is_canonical(&self, q: &Quiver) -> bool {
        q.tails().iter().enumerate().all(|(t, tl)| {
            let d = self.window().depths[t];
            let at = self.dim(q.tail_vertex(t, d));
            at == self.stable[t] && (self.stable[t] == 0 || tl.word.constant_from().is_some_and(|(_, m)| m <= d))
        })
    }

    pub fn direct_sum(q: &Quiver, parts: &[WindowRep]) -> WindowRep {
        if parts.is_empty() {
            return WindowRep::zero(q, &settle(q, &Window::core_only(q)));
        }
        let refs: Vec<&WindowRep> = parts.iter().collect();
        let parts = WindowRep::align(q, &refs);
        let wq = parts[0].wq.clone();
        let f = q.field();
        let dims: Vec<usize> = (0..wq.len()).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let maps = (0..wq.arrows.len())
            .map(|k| Matrix::block_diag(f, &parts.iter().map(|p| p.maps[k].clone()).collect::<Vec<_>>()))
            .collect();
        let stable = (0..q.tails().len()).map(|t| parts.iter().map(|p| p.stable[t]).sum()).collect();
        WindowRep { wq, field: f, dims, maps, stable }
    }

    /// Subrepresentation spanned by the given columns at every vertex (the
    /// caller guarantees closure under the arrows).
    pub fn subrep(&self, q: &Quiver, bases: &[Matrix]) -> WindowRep {
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let maps = self
            .wq
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(_, s, t))| {
                let img = self.maps[k].mul(&bases[s]);
                bases[t].solve(&img).expect("subspace not closed under the arrow")
            })
            .collect();
        WindowRep::from_parts(q, self.wq.clone(), dims, maps)
    }

    /// Quotient by the subrepresentation spanned by `bases`, together with the
    /// projection at each vertex.
    pub fn quotient(&self, q: &Quiver, bases: &[Matrix]) -> (WindowRep, Morphism) {
        let (r, p, _) = self.quotient_full(q, bases);
        (r, p)
    }

    /// Quotient with projections and sections (`proj · section = 1`).
    pub fn quotient_full(&self, q: &Quiver, bases: &[Matrix]) -> (WindowRep, Morphism, Morphism) {
        let f = self.field;
        let mut sections = Vec::new();
        let mut projs = Vec::new();
        for (i, b) in bases.iter().enumerate() {
            let n = self.dims[i];
            let b = b.image_basis();
            let comp = b.complement_units();
            let e = Matrix::from_fn(f, n, comp.len(), |r, c| if r == comp[c] { f.one() } else { f.zero() });
            // Coordinates in the basis [b | e]; keep the e-part.
            let full = b.hstack(&e);
            let inv = full.inverse().expect("basis completion is invertible");
            let proj = inv.select_rows(&(b.cols()..n).collect::<Vec<_>>());
            sections.push(e);
            projs.push(proj);
        }
        let dims: Vec<usize> = projs.iter().map(|p| p.rows()).collect();
        let maps = self
            .wq
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(_, s, t))| projs[t].mul(&self.maps[k]).mul(&sections[s]))
            .collect();
        (WindowRep::from_parts(q, self.wq.clone(), dims, maps), projs, sections)
    }

    /// Kernel of a morphism `self → tgt`, with its inclusion.
    pub fn kernel_of(&self, q: &Quiver, f: &Morphism) -> (WindowRep, Morphism) {
        let bases: Vec<Matrix> = f.iter().map(|m| m.kernel()).collect();
        let k = self.subrep(q, &bases);
        (k, bases)
    }

    /// Cokernel of a morphism `src → self`, with its projection.
    pub fn cokernel_of(&self, q: &Quiver, f: &Morphism) -> (WindowRep, Morphism) {
        let bases: Vec<Matrix> = f.iter().map(|m| m.image_basis()).collect();
        self.quotient(q, &bases)
    }

    /// The dual representation over the opposite quiver (same window).
    pub fn dual(&self, qop: &Quiver) -> WindowRep {
        let wq = Arc::new(WinQuiver::new(qop, self.window()));
        debug_assert_eq!(wq.arrows.len(), self.wq.arrows.len());
        let maps = self.maps.iter().map(|m| m.transpose()).collect();
        WindowRep { wq, field: self.field, dims: self.dims.clone(), maps, stable: self.stable.clone() }
    }

    /// Restriction to a full subquiver, extended by zero.
    pub fn restrict(&self, q: &Quiver, sigma: &Subquiver) -> WindowRep {
        let w = self.window().union(&sigma.window).grow(1);
        let m = self.extend(q, &w);
        let f = self.field;
        let keep: Vec<bool> = m.wq.verts.iter().map(|&v| sigma.contains(v)).collect();
        let dims: Vec<usize> = m.dims.iter().zip(&keep).map(|(&d, &k)| if k { d } else { 0 }).collect();
        let maps =
            m.wq.arrows
                .iter()
                .enumerate()
                .map(
                    |(k, &(_, s, t))| {
                        if keep[s] && keep[t] {
                            m.maps[k].clone()
                        } else {
                            Matrix::zeros(f, dims[t], dims[s])
                        }
                    },
                )
                .collect();
        WindowRep::from_parts(q, m.wq.clone(), dims, maps)
    }

    pub fn dim_vector(&self) -> DimVector {
        let values = self.wq.verts.iter().zip(&self.dims).filter(|(_, &d)| d > 0).map(|(&v, &d)| (v, d)).collect();
        DimVector { window: self.window().clone(), values, stable: self.stable.clone() }
    }

    pub fn identity(&self) -> Morphism {
        self.dims.iter().map(|&d| Matrix::identity(self.field, d)).collect()
    }

    /// Checks that `f: self → tgt` commutes with all arrows.
    pub fn is_morphism(&self, tgt: &WindowRep, f: &Morphism) -> bool {
        self.wq.arrows.iter().enumerate().all(|(k, &(_, s, t))| f[t].mul(&self.maps[k]) == tgt.maps[k].mul(&f[s]))
    }
}

/// Composes two morphisms on a common window (`g ∘ f`).
pub fn compose(g: &Morphism, f: &Morphism) -> Morphism {
    g.iter().zip(f).map(|(a, b)| a.mul(b)).collect()
}

/// A full subquiver described by a window predicate plus per-tail verdicts
/// beyond the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquiver {
    pub window: Window,
    pub members: Vec<Vertex>,
    /// Vertices of tail `t` beyond the window belong to the subquiver iff `beyond[t]`.
    pub beyond: Vec<bool>,
}

impl Subquiver {
    pub fn whole(q: &Quiver) -> Subquiver {
        let window = settle(q, &Window::core_only(q));
        Subquiver { members: window.vertices(q), beyond: vec![true; q.tails().len()], window }
    }

    pub fn from_predicate(q: &Quiver, window: &Window, pred: impl Fn(Vertex) -> bool) -> Subquiver {
        let members = window.vertices(q).into_iter().filter(|&v| pred(v)).collect();
        let beyond = (0..q.tails().len()).map(|t| pred(Vertex::Tail(t, window.depths[t] + 1))).collect();
        Subquiver { window: window.clone(), members, beyond }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        if self.window.contains(v) {
            self.members.contains(&v)
        } else {
            match v {
                Vertex::Tail(t, _) => self.beyond[t],
                Vertex::Core(_) => false,
            }
        }
    }
}

/// Dimension vector with its tail asymptotics: beyond the window, tail `t`
/// carries the constant value `stable[t]`.
#[derive(Clone, Debug)]
pub struct DimVector {
    pub window: Window,
    pub values: BTreeMap<Vertex, usize>,
    pub stable: Vec<usize>,
}

impl DimVector {
    pub fn at(&self, v: Vertex) -> usize {
        if self.window.contains(v) {
            self.values.get(&v).copied().unwrap_or(0)
        } else {
            match v {
                Vertex::Tail(t, _) => self.stable[t],
                Vertex::Core(_) => 0,
            }
        }
    }

    pub fn total(&self) -> Option<usize> {
        if self.stable.iter().any(|&s| s > 0) {
            None
        } else {
            Some(self.values.values().sum())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.total() == Some(0)
    }

    pub fn max_entry(&self) -> usize {
        self.values.values().chain(&self.stable).copied().max().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Vertex> {
        self.values.keys().copied().collect()
    }

    /// Onset per tail: the first index from which the value is constant.
    pub fn onsets(&self) -> Vec<u64> {
        (0..self.stable.len())
            .map(|t| {
                let mut i = self.window.depths[t];
                while i > 0 && self.values.get(&Vertex::Tail(t, i)).copied().unwrap_or(0) == self.stable[t] {
                    i -= 1;
                }
                i + 1
            })
            .collect()
    }

    /// Signed linear combination `Σ c_i · v_i`; the result is `None` if some
    /// entry would be negative.
    pub fn combine(q: &Quiver, terms: &[(i64, &DimVector)]) -> Option<DimVector> {
        let w = terms.iter().fold(Window::core_only(q), |acc, (_, d)| acc.union(&d.window));
        let mut values = BTreeMap::new();
        for v in w.vertices(q) {
            let s: i64 = terms.iter().map(|(c, d)| c * d.at(v) as i64).sum();
            if s < 0 {
                return None;
            }
            if s > 0 {
                values.insert(v, s as usize);
            }
        }
        let mut stable = Vec::new();
        for t in 0..q.tails().len() {
            let s: i64 = terms.iter().map(|(c, d)| c * d.stable[t] as i64).sum();
            if s < 0 {
                return None;
            }
            stable.push(s as usize);
        }
        Some(DimVector { window: w, values, stable })
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        let values: serde_json::Map<String, Value> =
            self.values.iter().map(|(&v, &d)| (q.vertex_name(v), json!(d))).collect();
        let onsets = self.onsets();
        let tails: Vec<Value> =
            (0..self.stable.len()).map(|t| json!({"tail": t, "onset": onsets[t], "word": [self.stable[t]]})).collect();
        json!({"values": values, "tails": tails})
    }

    /// `a:b` pairs in label order (for type-A and D∞ quivers) or vertex order.
    pub fn render(&self, q: &Quiver) -> String {
        let mut items: Vec<(i64, String, usize)> =
            self.values.iter().map(|(&v, &d)| (q.label_of(v).unwrap_or(0), q.vertex_name(v), d)).collect();
        items.sort();
        let mut s: Vec<String> = items.into_iter().map(|(_, n, d)| format!("{n}:{d}")).collect();
        for (t, &st) in self.stable.iter().enumerate() {
            if st > 0 {
                s.push(format!("tail{t}→{st}"));
            }
        }
        format!("({})", s.join(", "))
    }
}

impl PartialEq for DimVector {
    fn eq(&self, o: &Self) -> bool {
        if self.stable != o.stable {
            return false;
        }
        let keys: std::collections::BTreeSet<Vertex> = self.values.keys().chain(o.values.keys()).copied().collect();
        keys.into_iter().all(|v| self.at(v) == o.at(v))
    }
}

/// An end of a string on a line-shaped (or D∞) quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    At(i64),
    Infinite,
}

/// A string on a canonical type-A or D∞ quiver, stored normalised: the walk
/// is the tree path between `lo` and `hi`, `lo` ≤ `hi` in label order, and an
/// infinite `lo` means the walk runs to −∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StringSpec {
    pub lo: End,
    pub hi: End,
}

impl StringSpec {
    pub fn interval(a: i64, b: i64) -> StringSpec {
        StringSpec { lo: End::At(a.min(b)), hi: End::At(a.max(b)) }
    }

    pub fn trivial(x: i64) -> StringSpec {
        StringSpec::interval(x, x)
    }

    /// Normalises the orientation of a walk given by its two ends.
    pub fn between(a: End, b: End) -> StringSpec {
        match (a, b) {
            (End::At(x), End::At(y)) => StringSpec::interval(x, y),
            (End::Infinite, other) | (other, End::Infinite) => {
                // Only meaningful with context; callers use `ray` for rays.
                StringSpec { lo: other, hi: End::Infinite }
            }
        }
    }

    pub fn ray_up(from: i64) -> StringSpec {
        StringSpec { lo: End::At(from), hi: End::Infinite }
    }

    pub fn ray_down(from: i64) -> StringSpec {
        StringSpec { lo: End::Infinite, hi: End::At(from) }
    }

    pub fn is_finite(&self) -> bool {
        self.lo != End::Infinite && self.hi != End::Infinite
    }
}

impl fmt::Display for StringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |e: End, neg: bool| match e {
            End::At(x) => x.to_string(),
            End::Infinite => (if neg { "-inf" } else { "inf" }).to_string(),
        };
        write!(f, "[{},{}]", e(self.lo, true), e(self.hi, false))
    }
}

/// The symbolic and materialised representation encodings.
#[derive(Clone, Debug, PartialEq)]
pub enum Rep {
    Proj(Vertex),
    Inj(Vertex),
    Simple(Vertex),
    String(StringSpec),
    /// `N_{i,j}` on D∞ (`j = None` means `j = ∞`).
    DInf {
        i: u64,
        j: Option<u64>,
    },
    Window(WindowRep),
    /// `DTr` of the cokernel of a presentation, computed through the Nakayama functor.
    Dtr(Box<crate::ar::Presentation>),
    /// `D(inner)`, where `inner` is a representation of the opposite quiver.
    Dual(Box<Rep>),
    Sum(Vec<Rep>),
}

impl Rep {
    /// Materialises on a window containing `hint` (and whatever the encoding needs).
    pub fn materialize(&self, q: &Quiver, hint: &Window) -> Result<WindowRep> {
        let hint = settle(q, hint);
        match self {
            Rep::Proj(x) => {
                check_vertex(q, *x)?;
                Ok(build_settled(q, &hint, &[*x], |wq| proj_on(q, wq, *x)))
            }
            Rep::Inj(x) => {
                check_vertex(q, *x)?;
                Ok(build_settled(q, &hint, &[*x], |wq| inj_on(q, wq, *x)))
            }
            Rep::Simple(x) => {
                check_vertex(q, *x)?;
                Ok(build_settled(q, &hint, &[*x], |wq| thin_on(q, wq, &|v| v == *x)))
            }
            Rep::String(s) => {
                let supp = string_support(q, s)?;
                Ok(build_settled(q, &hint, &supp.anchors, |wq| thin_on(q, wq, &|v| supp.contains(q, v))))
            }
            Rep::DInf { i, j } => dinf_on(q, &hint, *i, *j),
            Rep::Window(w) => Ok(w.extend(q, &hint)),
            Rep::Dtr(p) => crate::ar::dtr_of_presentation(q, p, &hint),
            Rep::Dual(inner) => {
                let qop = q.opposite();
                Ok(inner.materialize(&qop, &hint)?.dual(q))
            }
            Rep::Sum(parts) => {
                let ms: Result<Vec<WindowRep>> = parts.iter().map(|p| p.materialize(q, &hint)).collect();
                Ok(WindowRep::direct_sum(q, &ms?))
            }
        }
    }

    /// Materialises on the smallest canonical window.
    pub fn realize(&self, q: &Quiver) -> Result<WindowRep> {
        self.materialize(q, &Window::core_only(q))
    }

    pub fn dim_vector(&self, q: &Quiver, w: &Window) -> Result<DimVector> {
        Ok(self.materialize(q, w)?.dim_vector())
    }

    pub fn dim_at(&self, q: &Quiver, v: Vertex) -> Result<usize> {
        match self {
            Rep::Proj(x) => Ok(q.path_count(*x, v)),
            Rep::Inj(x) => Ok(q.path_count(v, *x)),
            Rep::Simple(x) => Ok(usize::from(*x == v)),
            _ => Ok(self.materialize(q, &Window::covering(q, &[v], 0))?.dim(v)),
        }
    }

    /// Human-readable name (symbolic encodings only; see [`describe`]).
    pub fn name(&self, q: &Quiver) -> String {
        match self {
            Rep::Proj(x) => format!("P({})", q.vertex_name(*x)),
            Rep::Inj(x) => format!("I({})", q.vertex_name(*x)),
            Rep::Simple(x) => format!("S({})", q.vertex_name(*x)),
            Rep::String(s) => crate::strings::string_name(q, s),
            Rep::DInf { i, j } => match j {
                Some(j) => format!("N({i},{j})"),
                None => format!("N({i},inf)"),
            },
            Rep::Window(w) => describe(q, w),
            Rep::Dtr(_) => "DTr(…)".into(),
            Rep::Dual(inner) => format!("D({})", inner.name(&q.opposite())),
            Rep::Sum(parts) => parts.iter().map(|p| p.name(q)).collect::<Vec<_>>().join(" ⊕ "),
        }
    }

    pub fn to_json(&self, q: &Quiver) -> Result<Value> {
        let m = self.realize(q)?;
        let (kind, data) = match self {
            Rep::Proj(x) => ("proj", json!({"vertex": q.vertex_name(*x)})),
            Rep::Inj(x) => ("inj", json!({"vertex": q.vertex_name(*x)})),
            Rep::Simple(x) => ("simple", json!({"vertex": q.vertex_name(*x)})),
            Rep::String(s) => ("string", json!({"walk": s.to_string()})),
            Rep::DInf { i, j } => ("dinf", json!({"i": i, "j": j})),
            _ => ("window", json!({"window": m.window().depths})),
        };
        Ok(json!({
            "kind": kind,
            "name": describe(q, &m),
            "data": data,
            "dim_vector": m.dim_vector().to_json(q),
            "finite_dimensional": m.is_finite_dim(),
        }))
    }
}

fn check_vertex(q: &Quiver, x: Vertex) -> Result<()> {
    let ok = match x {
        Vertex::Core(c) => c < q.core_len(),
        Vertex::Tail(t, i) => t < q.tails().len() && i >= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnknownVertex(format!("{x:?}")))
    }
}

/// Builds on successively deeper windows until the boundary is canonical.
fn build_settled(q: &Quiver, hint: &Window, anchors: &[Vertex], f: impl Fn(&Arc<WinQuiver>) -> WindowRep) -> WindowRep {
    let mut w = settle(q, &hint.union(&Window::covering(q, anchors, 1)));
    for _ in 0..64 {
        let wq = Arc::new(WinQuiver::new(q, &w));
        let r = f(&wq);
        if r.is_canonical(q) {
            return r;
        }
        let grow = q.tails().iter().map(|t| t.word.period_len() + 1).max().unwrap_or(1);
        w = w.grow(grow);
    }
    panic!("representation does not settle on any window");
}

/// `P_x` on a window: basis of `P_x(z)` = paths `x ⇝ z`.
pub(crate) fn proj_on(q: &Quiver, wq: &Arc<WinQuiver>, x: Vertex) -> WindowRep {
    let f = q.field();
    let xi = wq.idx(x).expect("anchor in window");
    let paths = wq.paths_from(xi);
    let index: Vec<HashMap<&Vec<usize>, usize>> =
        paths.iter().map(|ps| ps.iter().enumerate().map(|(i, p)| (p, i)).collect()).collect();
    let dims: Vec<usize> = paths.iter().map(|p| p.len()).collect();
    let maps = wq
        .arrows
        .iter()
        .enumerate()
        .map(|(k, &(_, s, t))| {
            let mut m = Matrix::zeros(f, dims[t], dims[s]);
            for (c, p) in paths[s].iter().enumerate() {
                let mut ext = p.clone();
                ext.push(k);
                let r = index[t][&ext];
                m.set(r, c, f.one());
            }
            m
        })
        .collect();
    WindowRep::from_parts(q, wq.clone(), dims, maps)
}

/// `I_x` on a window: basis of `I_x(z)` = dual basis of paths `z ⇝ x`; an arrow
/// `α: z → z'` sends `δ_τ` to `δ_π` when `τ = απ`.
pub(crate) fn inj_on(q: &Quiver, wq: &Arc<WinQuiver>, x: Vertex) -> WindowRep {
    let f = q.field();
    let xi = wq.idx(x).expect("anchor in window");
    let paths = wq.paths_to(xi);
    let index: Vec<HashMap<&[usize], usize>> =
        paths.iter().map(|ps| ps.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect()).collect();
    let dims: Vec<usize> = paths.iter().map(|p| p.len()).collect();
    let maps = wq
        .arrows
        .iter()
        .enumerate()
        .map(|(k, &(_, s, t))| {
            let mut m = Matrix::zeros(f, dims[t], dims[s]);
            for (c, tau) in paths[s].iter().enumerate() {
                if tau.first() == Some(&k) {
                    let r = index[t][&tau[1..]];
                    m.set(r, c, f.one());
                }
            }
            m
        })
        .collect();
    WindowRep::from_parts(q, wq.clone(), dims, maps)
}

/// Thin representation on a vertex set (identity on arrows inside it).
fn thin_on(q: &Quiver, wq: &Arc<WinQuiver>, member: &dyn Fn(Vertex) -> bool) -> WindowRep {
    let f = q.field();
    let dims: Vec<usize> = wq.verts.iter().map(|&v| usize::from(member(v))).collect();
    let maps = wq
        .arrows
        .iter()
        .map(
            |&(_, s, t)| {
                if dims[s] == 1 && dims[t] == 1 {
                    Matrix::identity(f, 1)
                } else {
                    Matrix::zeros(f, dims[t], dims[s])
                }
            },
        )
        .collect();
    WindowRep::from_parts(q, wq.clone(), dims, maps)
}

/// The vertex set of a string, as finite anchors plus per-tail verdicts.
pub struct StringSupport {
    pub anchors: Vec<Vertex>,
    lo: Option<i64>,
    hi: Option<i64>,
    /// D∞ only: which fork leaves are included.
    leaves: [bool; 2],
    dinf: bool,
}

impl StringSupport {
    pub fn contains(&self, q: &Quiver, v: Vertex) -> bool {
        let Some(l) = q.label_of(v) else { return false };
        if self.dinf && l < 2 {
            return self.leaves[l as usize];
        }
        self.lo.is_none_or(|a| l >= a) && self.hi.is_none_or(|b| l <= b)
    }
}

/// Validates a string and computes its support.
pub fn string_support(q: &Quiver, s: &StringSpec) -> Result<StringSupport> {
    let class = q.classify()?;
    let lm = q.labels().ok_or_else(|| Error::InvalidString("wrong quiver type".into()))?;
    let dinf = class == QuiverClass::InfDynkin(InfType::DInf);
    if !class.is_type_a() && !dinf {
        return Err(Error::InvalidString("wrong quiver type".into()));
    }
    let exists = |x: i64| q.vertex_at(x).is_some();
    let mut anchors = Vec::new();
    for e in [s.lo, s.hi] {
        if let End::At(x) = e {
            if !exists(x) {
                return Err(Error::InvalidString(format!("vertex {x} is not in the quiver")));
            }
            anchors.push(q.vertex_at(x).unwrap());
        }
    }
    if let (End::At(a), End::At(b)) = (s.lo, s.hi) {
        if a > b {
            return Err(Error::InvalidString("not normalised".into()));
        }
    }
    // Infinite ends must run along a tail that is eventually a right infinite path.
    for (e, sign) in [(s.lo, -1i64), (s.hi, 1i64)] {
        if e == End::Infinite {
            let t = (0..q.tails().len()).find(|&t| lm.tail_sign[t] == sign);
            let Some(t) = t else {
                return Err(Error::InvalidString("the quiver does not extend in that direction".into()));
            };
            match q.tails()[t].word.constant_from() {
                Some((Dir::Out, _)) => {}
                Some((Dir::In, _)) => {
                    return Err(Error::InvalidString("the walk contains a left infinite path".into()))
                }
                None => return Err(Error::InvalidString("infinitely many sinks and sources".into())),
            }
        }
    }
    let lo = match s.lo {
        End::At(a) => Some(a),
        End::Infinite => None,
    };
    let hi = match s.hi {
        End::At(b) => Some(b),
        End::Infinite => None,
    };
    let mut leaves = [false; 2];
    let (mut lo2, hi2) = (lo, hi);
    if dinf {
        let a = lo.ok_or_else(|| Error::InvalidString("D∞ strings start at a vertex".into()))?;
        match (a, hi) {
            (0, Some(1)) => {
                leaves = [true, true];
                lo2 = Some(2);
                return Ok(StringSupport { anchors, lo: lo2, hi: Some(2), leaves, dinf });
            }
            (0 | 1, Some(b)) if b < 2 => {
                leaves[a as usize] = true;
                return Ok(StringSupport { anchors, lo: Some(i64::MAX), hi: Some(i64::MIN), leaves, dinf });
            }
            (0 | 1, _) => {
                leaves[a as usize] = true;
                lo2 = Some(2);
            }
            _ => {}
        }
    }
    Ok(StringSupport { anchors, lo: lo2, hi: hi2, leaves, dinf })
}

/// `N_{i,j}` / `N_{i,∞}` on D∞: fork 1,1; `i` spine vertices of dimension 2
/// starting at 2; then `j` vertices of dimension 1.
fn dinf_on(q: &Quiver, hint: &Window, i: u64, j: Option<u64>) -> Result<WindowRep> {
    if q.classify()? != QuiverClass::InfDynkin(InfType::DInf) {
        return Err(Error::WrongType("N(i,j) needs a quiver of type D_inf".into()));
    }
    match j {
        None if !q.infinite_path_profile().has_right_infinite => return Err(Error::NoInfinitePath),
        Some(0) => return Err(Error::WrongType("N(i,j) needs j ≥ 1".into())),
        _ => {}
    }
    let f = q.field();
    let end = j.map(|j| 2 + i as i64 + j as i64 - 1);
    let dim_of = |l: i64| -> usize {
        if l < 2 {
            1
        } else if l < 2 + i as i64 {
            2
        } else if end.is_none_or(|e| l <= e) {
            1
        } else {
            0
        }
    };
    let far = q.vertex_at(end.unwrap_or(2 + i as i64) + 1).unwrap();
    let r = build_settled(q, hint, &[far], |wq| {
        let dims: Vec<usize> = wq.verts.iter().map(|&v| dim_of(q.label_of(v).unwrap())).collect();
        let maps = wq
            .arrows
            .iter()
            .map(|&(a, s, t)| {
                let (ls, lt) = (q.label_of(wq.verts[s]).unwrap(), q.label_of(wq.verts[t]).unwrap());
                let (ds, dt) = (dims[s], dims[t]);
                if ds == 0 || dt == 0 {
                    return Matrix::zeros(f, dt, ds);
                }
                let _ = a;
                let e = |v: [i64; 2]| Matrix::from_i64_rows(f, &[vec![v[0]], vec![v[1]]]);
                let row = |v: [i64; 2]| Matrix::from_i64_rows(f, &[vec![v[0], v[1]]]);
                match (ds, dt) {
                    (1, 1) => Matrix::identity(f, 1),
                    (2, 2) => Matrix::identity(f, 2),
                    (1, 2) => match ls {
                        0 => e([1, 0]),
                        1 => e([0, 1]),
                        _ => e([1, 1]),
                    },
                    (2, 1) => match lt {
                        0 => row([0, 1]),
                        1 => row([1, 0]),
                        _ => row([1, -1]),
                    },
                    _ => unreachable!(),
                }
            })
            .collect();
        let _ = &dims;
        WindowRep::from_parts(q, wq.clone(), dims, maps)
    });
    Ok(r)
}

/// The Kronecker family: `M_p(a) = M_p(b) = k[x]/⟨p⟩`, first arrow identity,
/// second arrow the companion matrix of `p`.
pub fn kronecker_regular(q: &Quiver, p: &Poly) -> Result<(Rep, Irreducibility)> {
    let arrows = q.core_arrows();
    let is_kronecker = q.is_finite()
        && q.core_len() == 2
        && arrows.len() == 2
        && arrows[0].from == arrows[1].from
        && arrows[0].to == arrows[1].to;
    if !is_kronecker {
        return Err(Error::WrongQuiver);
    }
    let irr = p.irreducibility();
    if irr == Irreducibility::Reducible {
        return Err(Error::ReduciblePolynomial(p.to_string()));
    }
    let p = p.monic();
    let n = p.degree();
    let f = q.field();
    let w = Window::core_only(q);
    let wq = Arc::new(WinQuiver::new(q, &w));
    let dims = vec![n; 2];
    let maps = wq
        .arrows
        .iter()
        .map(|&(a, _, _)| match a {
            Arrow::Core(0) => Matrix::identity(f, n),
            _ => p.companion(),
        })
        .collect();
    Ok((Rep::Window(WindowRep::from_parts(q, wq, dims, maps)), irr))
}

/// Radical, top and socle. Projectives and injectives get symbolic answers.
pub fn rad_top_soc(q: &Quiver, m: &Rep) -> Result<(Rep, Rep, Rep)> {
    match m {
        Rep::Proj(x) => {
            let rad = Rep::Sum(q.out_arrows(*x).into_iter().map(|a| Rep::Proj(q.target(a))).collect());
            let soc = Rep::Window(socle(q, &m.realize(q)?));
            Ok((rad, Rep::Simple(*x), soc))
        }
        Rep::Inj(x) => {
            let w = m.realize(q)?;
            Ok((Rep::Window(radical(q, &w).0), Rep::Window(top(q, &w)), Rep::Simple(*x)))
        }
        _ => {
            let w = m.realize(q)?;
            Ok((Rep::Window(radical(q, &w).0), Rep::Window(top(q, &w)), Rep::Window(socle(q, &w))))
        }
    }
}

/// Radical subspace bases, accounting for identity inflow from beyond the window.
pub fn radical(q: &Quiver, m: &WindowRep) -> (WindowRep, Vec<Matrix>) {
    let f = m.field();
    let wq = m.wq().clone();
    let bases: Vec<Matrix> = (0..wq.len())
        .map(|v| {
            if inflow_from_beyond(q, m, v) {
                return Matrix::identity(f, m.dims[v]);
            }
            let mut acc = Matrix::zeros(f, m.dims[v], 0);
            for &k in &wq.inn[v] {
                acc = acc.hstack(&m.maps[k]);
            }
            acc.image_basis()
        })
        .collect();
    (m.subrep(q, &bases), bases)
}

/// Whether the boundary vertex `v` receives an identity from outside the window.
fn inflow_from_beyond(q: &Quiver, m: &WindowRep, v: usize) -> bool {
    if let Vertex::Tail(t, i) = m.wq().verts[v] {
        i == m.window().depths[t] && m.stable[t] > 0 && q.tails()[t].word.letter(i) == Dir::In
    } else {
        false
    }
}

fn outflow_to_beyond(q: &Quiver, m: &WindowRep, v: usize) -> bool {
    if let Vertex::Tail(t, i) = m.wq().verts[v] {
        i == m.window().depths[t] && m.stable[t] > 0 && q.tails()[t].word.letter(i) == Dir::Out
    } else {
        false
    }
}

pub fn top(q: &Quiver, m: &WindowRep) -> WindowRep {
    let (_, bases) = radical(q, m);
    m.quotient(q, &bases).0
}

/// Top generators: at each vertex, unit vectors completing the radical.
pub fn top_generators(q: &Quiver, m: &WindowRep) -> Vec<(usize, Vec<Scalar>)> {
    let f = m.field();
    let (_, bases) = radical(q, m);
    let mut out = Vec::new();
    for (v, b) in bases.iter().enumerate() {
        for c in b.complement_units() {
            let mut e = vec![f.zero(); m.dims[v]];
            e[c] = f.one();
            out.push((v, e));
        }
    }
    out
}

pub fn socle(q: &Quiver, m: &WindowRep) -> WindowRep {
    m.subrep(q, &socle_bases(q, m))
}

/// A seeded random finite-dimensional representation supported inside `w`
/// (zero on each tail's last window vertex), entries in `[-2, 2]`.
pub fn random_finite(q: &Quiver, w: &Window, max_dim: usize, seed: u64) -> WindowRep {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let wq = Arc::new(WinQuiver::new(q, w));
    let f = q.field();
    let boundary: Vec<Vertex> = (0..q.tails().len()).map(|t| q.tail_vertex(t, w.depths[t])).collect();
    let dims: Vec<usize> =
        wq.verts.iter().map(|v| if boundary.contains(v) { 0 } else { rng.gen_range(0..=max_dim) }).collect();
    let maps = wq
        .arrows
        .iter()
        .map(|&(_, s, t)| Matrix::from_fn(f, dims[t], dims[s], |_, _| f.from_i64(rng.gen_range(-2..=2))))
        .collect();
    WindowRep::from_parts(q, wq, dims, maps)
}

/// Socle subspace bases; boundary vertices feeding the identity continuation
/// contribute nothing.
pub fn socle_bases(q: &Quiver, m: &WindowRep) -> Vec<Matrix> {
    let f = m.field();
    let wq = m.wq().clone();
    (0..wq.len())
        .map(|v| {
            if outflow_to_beyond(q, m, v) {
                return Matrix::zeros(f, m.dims[v], 0);
            }
            let mut acc = Matrix::zeros(f, 0, m.dims[v]);
            for &k in &wq.out[v] {
                acc = acc.vstack(&m.maps[k]);
            }
            acc.kernel()
        })
        .collect()
}

/// Duality `D`: a representation of `Q` becomes one of `Q^op`.
pub fn dualize(m: &Rep) -> Rep {
    match m {
        Rep::Proj(x) => Rep::Inj(*x),
        Rep::Inj(x) => Rep::Proj(*x),
        Rep::Simple(x) => Rep::Simple(*x),
        Rep::String(s) => Rep::String(*s),
        Rep::Dual(inner) => (**inner).clone(),
        Rep::Sum(parts) => Rep::Sum(parts.iter().map(dualize).collect()),
        other => Rep::Dual(Box::new(other.clone())),
    }
}

/// Dualises a materialised representation of `q` into one of `q.opposite()`.
pub fn dualize_window(q: &Quiver, m: &WindowRep) -> WindowRep {
    m.dual(&q.opposite())
}

/// Witness that a representation is finitely presented: on the co-finite
/// successor-closed part of its support beyond `from[t]` on each infinite
/// tail it is a direct sum of `stable[t]` copies of the projective at the cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpCertificate {
    /// Per tail: `Some(i)` when `{Tail(t, j) : j ≥ i}` belongs to Σ.
    pub sigma: Vec<Option<u64>>,
    /// Tops of `M_Σ` with multiplicities.
    pub tops: Vec<(Vertex, usize)>,
}

pub fn fp_certificate(q: &Quiver, m: &WindowRep) -> std::result::Result<FpCertificate, Vertex> {
    let mut sigma = Vec::new();
    let mut tops = Vec::new();
    for (t, &s) in m.stable.iter().enumerate() {
        if s == 0 {
            sigma.push(None);
            continue;
        }
        let d = m.window().depths[t];
        match q.tails()[t].word.constant_from() {
            Some((Dir::Out, _)) => {
                sigma.push(Some(d));
                tops.push((Vertex::Tail(t, d), s));
            }
            _ => return Err(Vertex::Tail(t, d)),
        }
    }
    Ok(FpCertificate { sigma, tops })
}

/// Best-effort name for a materialised indecomposable: standard families and
/// strings are recognised by dimension vector on (infinite) Dynkin quivers.
pub fn describe(q: &Quiver, m: &WindowRep) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let dv = m.dim_vector();
    let dynkin = q.classify().is_ok_and(|c| c.is_dynkin());
    if dynkin {
        if let Some(n) = recognize(q, &dv) {
            return n.name(q);
        }
    }
    format!("X{}", dv.render(q))
}

/// Maps a dimension vector to a named indecomposable on type-A / D∞ quivers
/// (finite Dynkin types beyond A only recognise P, I, S).
pub fn recognize(q: &Quiver, dv: &DimVector) -> Option<Rep> {
    let supp = dv.support();
    if dv.total() == Some(1) {
        return Some(Rep::Simple(supp[0]));
    }
    let class = q.classify().ok()?;
    if class.is_type_a() || class == QuiverClass::InfDynkin(InfType::DInf) {
        if let Some(s) = crate::strings::string_of_dims(q, dv) {
            return Some(Rep::String(s));
        }
        if class == QuiverClass::InfDynkin(InfType::DInf) {
            if let Some((i, j)) = crate::strings::dinf_params(q, dv) {
                return Some(Rep::DInf { i, j });
            }
        }
    }
    let w = dv.window.clone();
    for &x in &supp {
        for r in [Rep::Proj(x), Rep::Inj(x)] {
            if let Ok(m) = r.materialize(q, &w) {
                if m.dim_vector() == *dv {
                    return Some(r);
                }
            }
        }
    }
    None
}
