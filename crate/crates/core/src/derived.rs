//! Almost split triangles in the bounded derived category of finitely
//! presented representations, and the connecting component.

use crate::ar::{ending_at, is_injective, is_projective, starting_at, ARSequence, Side};
use crate::batch::Mode;
use crate::components::{knit_component_with, CellId, ComponentKind, ComponentWindow, Seed, ShapeTag};
use crate::error::{Error, Result, Unavailable};
use crate::hom::{decompose, is_indecomposable, is_isomorphic_window};
use crate::quiver::{Quiver, Vertex};
use crate::rep::{describe, radical, socle_bases, top_generators, Rep, WindowRep};
use serde_json::{json, Value};

/// `M[shift]` for a representation `M`.
#[derive(Clone, Debug)]
pub struct DerivedObject {
    pub rep: WindowRep,
    pub shift: i64,
}

impl DerivedObject {
    pub fn new(rep: WindowRep, shift: i64) -> DerivedObject {
        DerivedObject { rep, shift }
    }

    pub fn name(&self, q: &Quiver) -> String {
        let base = describe(q, &self.rep);
        if self.shift == 0 {
            base
        } else {
            format!("{base}[{}]", self.shift)
        }
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "name": self.name(q),
            "rep": describe(q, &self.rep),
            "shift": self.shift,
            "dim_vector": self.rep.dim_vector().to_json(q),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleFamily {
    /// A shifted almost split sequence.
    FromASS,
    /// `I_x → I_x/S_x ⊕ (rad P_x)[1] → P_x[1] → I_x[1]`, shifted.
    Connecting,
}

impl TriangleFamily {
    pub fn name(self) -> &'static str {
        match self {
            TriangleFamily::FromASS => "FromASS",
            TriangleFamily::Connecting => "Connecting",
        }
    }
}

/// `X → ⊕ Y → Z → X[1]`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub start: DerivedObject,
    pub middle: Vec<DerivedObject>,
    pub end: DerivedObject,
    pub family: TriangleFamily,
    /// Vertex `x` of a connecting triangle.
    pub vertex: Option<Vertex>,
    /// The underlying sequence of a shifted one.
    pub sequence: Option<ARSequence>,
}

impl Triangle {
    fn from_sequence(s: ARSequence, k: i64) -> Triangle {
        Triangle {
            start: DerivedObject::new(s.left.clone(), k),
            middle: s.middle.iter().map(|m| DerivedObject::new(m.clone(), k)).collect(),
            end: DerivedObject::new(s.right.clone(), k),
            family: TriangleFamily::FromASS,
            vertex: None,
            sequence: Some(s),
        }
    }

    /// Shift of the end term minus the shift of the start term (0 or 1).
    pub fn jump(&self) -> i64 {
        self.end.shift - self.start.shift
    }

    /// Whether the Euler characteristic adds up: `χ(X) + χ(Z) = χ(⊕Y)`,
    /// with `χ(M[k]) = (−1)^k dim M` per vertex.
    pub fn euler_balanced(&self) -> bool {
        let mut parts: Vec<&WindowRep> = vec![&self.start.rep, &self.end.rep];
        parts.extend(self.middle.iter().map(|m| &m.rep));
        let verts: Vec<Vertex> = {
            let mut v: Vec<Vertex> = parts.iter().flat_map(|r| r.support()).collect();
            v.sort();
            v.dedup();
            v
        };
        let sign = |k: i64| if k.rem_euclid(2) == 0 { 1i64 } else { -1 };
        verts.iter().all(|&v| {
            let lhs = sign(self.start.shift) * self.start.rep.dim(v) as i64
                + sign(self.end.shift) * self.end.rep.dim(v) as i64;
            let rhs: i64 = self.middle.iter().map(|m| sign(m.shift) * m.rep.dim(v) as i64).sum();
            lhs == rhs
        })
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        let mut v = json!({
            "family": self.family.name(),
            "start": self.start.to_json(q),
            "middle": self.middle.iter().map(|m| m.to_json(q)).collect::<Vec<_>>(),
            "end": self.end.to_json(q),
            "euler_balanced": self.euler_balanced(),
        });
        if let Some(x) = self.vertex {
            v["vertex"] = json!(q.vertex_name(x));
        }
        if let Some(s) = &self.sequence {
            v["sequence"] = s.to_json(q);
        }
        v
    }
}

fn unavailable(u: Unavailable) -> Error {
    Error::Unavailable(u)
}

/// The vertex `x` with `M ≅ P_x`, if `M` is an indecomposable projective.
fn projective_vertex(q: &Quiver, m: &WindowRep) -> Result<Option<Vertex>> {
    if !is_projective(q, m)? {
        return Ok(None);
    }
    let tops = top_generators(q, m);
    Ok(match tops.as_slice() {
        [(v, _)] => Some(m.wq().verts[*v]),
        _ => None,
    })
}

/// The vertex `x` with `M ≅ I_x`, if `M` is a finite-dimensional indecomposable injective.
fn injective_vertex(q: &Quiver, m: &WindowRep) -> Result<Option<Vertex>> {
    if !m.is_finite_dim() || !is_injective(q, m)? {
        return Ok(None);
    }
    let soc = m.subrep(q, &socle_bases(q, m));
    Ok(match soc.support().as_slice() {
        [x] if soc.dim(*x) == 1 => Some(*x),
        _ => None,
    })
}

/// `(I_x/S_x, rad P_x)`, both decomposed.
pub fn connecting_middle(q: &Quiver, x: Vertex) -> Result<(Vec<WindowRep>, Vec<WindowRep>)> {
    let p = Rep::Proj(x).realize(q)?;
    let i = Rep::Inj(x).materialize(q, p.window())?;
    let (quot, _) = i.quotient(q, &socle_bases(q, &i));
    let (rad, _) = radical(q, &p);
    Ok((decompose(q, &quot), decompose(q, &rad)))
}

/// The connecting triangle through `x ∈ Q⁺`, with `I_x` in degree `k`.
pub fn connecting_triangle(q: &Quiver, x: Vertex, k: i64) -> Result<Triangle> {
    if !q.q_plus().contains(x) {
        return Err(unavailable(Unavailable::NotInQPlus));
    }
    let p = Rep::Proj(x).realize(q)?;
    let i = Rep::Inj(x).materialize(q, p.window())?;
    let (quot, rad) = connecting_middle(q, x)?;
    let mut middle: Vec<DerivedObject> = quot.into_iter().map(|m| DerivedObject::new(m, k)).collect();
    middle.extend(rad.into_iter().map(|m| DerivedObject::new(m, k + 1)));
    Ok(Triangle {
        start: DerivedObject::new(i, k),
        middle,
        end: DerivedObject::new(p, k + 1),
        family: TriangleFamily::Connecting,
        vertex: Some(x),
        sequence: None,
    })
}

/// The almost split triangle ending at (`EndingAt`) or starting at
/// (`StartingAt`) the indecomposable `obj`.
pub fn derived_ar_triangle(q: &Quiver, obj: &DerivedObject, side: Side) -> Result<Triangle> {
    let m = &obj.rep;
    if !is_indecomposable(q, m)? {
        return Err(unavailable(Unavailable::NotIndecomposable));
    }
    let k = obj.shift;
    match side {
        Side::EndingAt => {
            if let Some(x) = projective_vertex(q, m)? {
                if !q.q_plus().contains(x) {
                    return Err(unavailable(Unavailable::NotInQPlus));
                }
                return connecting_triangle(q, x, k - 1);
            }
            Ok(Triangle::from_sequence(ending_at(q, m)?, k))
        }
        Side::StartingAt => {
            if !m.is_finite_dim() {
                return Err(unavailable(Unavailable::InfiniteDimStart));
            }
            if let Some(x) = injective_vertex(q, m)? {
                if !q.q_plus().contains(x) {
                    return Err(unavailable(Unavailable::NotInQPlus));
                }
                return connecting_triangle(q, x, k);
            }
            Ok(Triangle::from_sequence(starting_at(q, m)?, k))
        }
    }
}

/// Whether there is an irreducible morphism `M → N[1]`: exactly when
/// `M ≅ I_x` for some `x ∈ Q⁺` and `N` is a direct summand of `rad P_x`.
pub fn derived_irr_shift(q: &Quiver, m: &WindowRep, n: &WindowRep) -> Result<bool> {
    if !is_indecomposable(q, m)? || !is_indecomposable(q, n)? {
        return Ok(false);
    }
    let Some(x) = injective_vertex(q, m)? else {
        return Ok(false);
    };
    if !q.q_plus().contains(x) {
        return Ok(false);
    }
    let (_, rad) = connecting_middle(q, x)?;
    for r in &rad {
        if is_isomorphic_window(q, r, n)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Which of the bounded derived category and its one-sided halves have
/// almost split triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedCapabilities {
    pub left: bool,
    pub right: bool,
}

impl DerivedCapabilities {
    pub fn both(&self) -> bool {
        self.left && self.right
    }

    pub fn to_json(&self) -> Value {
        json!({
            "derived_left_AR": self.left,
            "derived_right_AR": self.right,
            "derived_AR": self.both(),
        })
    }
}

pub fn derived_capabilities(q: &Quiver) -> Result<DerivedCapabilities> {
    q.require_connected()?;
    let prof = q.infinite_path_profile();
    Ok(DerivedCapabilities { left: !prof.has_right_infinite, right: !prof.has_left_infinite })
}

pub fn connecting_window(q: &Quiver, depth: usize) -> Result<ComponentWindow> {
    connecting_window_with(Mode::default(), q, depth)
}

/// The preprojective component glued to the preinjective ones shifted by −1.
/// Cells are indexed in `ℤQ^op`: orbit = vertex, `P_x` at power 0 and
/// `τ_D P_x = I_x[−1]` at power 1.
pub fn connecting_window_with(mode: Mode, q: &Quiver, depth: usize) -> Result<ComponentWindow> {
    let pp = knit_component_with(mode, q, &Seed::Preprojective, depth)?;
    let qp = q.q_plus();
    let strip = |o: &str| o[1..].to_string();
    let mut w = ComponentWindow {
        kind: ComponentKind::Connecting,
        cells: Default::default(),
        arrows: vec![],
        tau_links: vec![],
        shape: ShapeTag::ZQop,
        certificate: String::new(),
        closed: false,
    };
    for (id, c) in pp.cells {
        w.cells.insert(CellId::new(strip(&id.orbit), id.power), c);
    }
    for (a, b, k) in pp.arrows {
        w.arrows.push((CellId::new(strip(&a.orbit), a.power), CellId::new(strip(&b.orbit), b.power), k));
    }
    for c in 0..qp.components.len() {
        let pi = knit_component_with(mode, q, &Seed::Preinjective(c), depth)?;
        let mv = |id: &CellId| CellId::new(strip(&id.orbit), id.power + 1);
        for (id, mut cell) in pi.cells {
            cell.shift = -1;
            w.cells.insert(mv(&id), cell);
        }
        for (a, b, k) in pi.arrows {
            w.arrows.push((mv(&a), mv(&b), k));
        }
    }
    // I_x[−1] → P_y for each arrow x → y with x ∈ Q⁺.
    let mut glue: std::collections::BTreeMap<(CellId, CellId), usize> = Default::default();
    for id in w.cells.keys().filter(|id| id.power == 1 && w.cells[*id].shift == -1) {
        let Ok(x) = q.parse_vertex(&id.orbit) else { continue };
        if !qp.contains(x) {
            continue;
        }
        for a in q.out_arrows(x) {
            let to = CellId::new(q.vertex_name(q.target(a)), 0);
            if w.cells.contains_key(&to) {
                *glue.entry((id.clone(), to)).or_default() += 1;
            }
        }
    }
    w.arrows.extend(glue.into_iter().map(|((a, b), k)| (a, b, k)));
    w.arrows.sort();
    let ids: Vec<CellId> = w.cells.keys().cloned().collect();
    for id in ids {
        let t = CellId::new(&id.orbit, id.power + 1);
        if w.cells.contains_key(&t) {
            w.tau_links.push((id, t));
        }
    }
    let prof = q.infinite_path_profile();
    let (shape, cert) = match (prof.has_left_infinite, prof.has_right_infinite) {
        (false, false) => (ShapeTag::ZQop, "no infinite path: ZQop".to_string()),
        (false, true) => (
            ShapeTag::NminusQop,
            "right infinite paths only: N⁻Δ, Δ the right-most section of the preprojective component".to_string(),
        ),
        (true, false) => (ShapeTag::ZQop, "left infinite paths only: right stable full subquiver of ZQop".to_string()),
        (true, true) => (ShapeTag::ZQop, "infinite paths both ways: full translation subquiver of ZQop".to_string()),
    };
    w.shape = shape;
    w.certificate = cert;
    w.closed = q.is_finite();
    Ok(w)
}
