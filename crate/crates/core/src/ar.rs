//! Minimal presentations, the Nakayama functor, the translates `DTr`/`TrD`,
//! almost split sequences and minimal almost split maps.
//!
//! Everything is computed on finite windows. A window is accepted only once
//! every representation involved is in canonical form on it, so the answers
//! are those of the infinite quiver, not of a truncation.

use crate::error::{Error, Result, Unavailable};
use crate::hom::{
    decompose_with_maps, end_basis, flatten, hom_basis, is_indecomposable, lin_comb, span_matrix, total_matrix,
};
use crate::linalg::{Field, Matrix, Scalar};
use crate::poly::min_poly;
use crate::quiver::{Arrow, Quiver, Vertex, WinQuiver, Window};
use crate::rep::{
    compose, describe, dualize_window, fp_certificate, inj_on, proj_on, radical, settle, socle_bases, Morphism, Rep,
    WindowRep,
};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::Arc;

/// One summand `coeff · path` of a presentation entry; `path` runs from the
/// top `tops[row]` to the syzygy vertex of the column.
#[derive(Clone, Debug, PartialEq)]
pub struct PathTerm {
    pub row: usize,
    pub path: Vec<Arrow>,
    pub coeff: Scalar,
}

/// A minimal projective presentation `0 → ⊕ P(y_j) → ⊕ P(x_i) → M → 0`.
/// Column `j` is the image of the generator of `P(y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub field: Field,
    pub tops: Vec<Vertex>,
    pub syzygies: Vec<Vertex>,
    pub columns: Vec<Vec<PathTerm>>,
    /// A window covering every vertex and path mentioned.
    pub window: Window,
}

impl Presentation {
    pub fn is_projective(&self) -> bool {
        self.syzygies.is_empty()
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        let names = |vs: &[Vertex]| vs.iter().map(|&v| q.vertex_name(v)).collect::<Vec<_>>();
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|col| {
                let terms: Vec<Value> = col
                    .iter()
                    .map(|t| {
                        let path: Vec<String> = t.path.iter().map(|&a| q.arrow_label(a)).collect();
                        json!({"top": t.row, "path": path, "coeff": t.coeff.to_string()})
                    })
                    .collect();
                Value::Array(terms)
            })
            .collect();
        json!({"tops": names(&self.tops), "syzygies": names(&self.syzygies), "map": columns})
    }
}

/// Grows `base` (settled, covering `anchors` with margin one) until `f`
/// accepts the window.
fn grow_until<T>(q: &Quiver, base: &Window, anchors: &[Vertex], f: impl Fn(&Arc<WinQuiver>) -> Option<T>) -> T {
    let mut w = settle(q, &base.union(&Window::covering(q, anchors, 1)));
    let step = q.tails().iter().map(|t| t.word.period_len() + 1).max().unwrap_or(1);
    for _ in 0..64 {
        let wq = Arc::new(WinQuiver::new(q, &w));
        if let Some(t) = f(&wq) {
            return t;
        }
        w = w.grow(step);
    }
    panic!("no canonical window found");
}

fn local_path(wq: &WinQuiver, path: &[Arrow]) -> Vec<usize> {
    path.iter().map(|a| wq.arrow_index[a]).collect()
}

/// `⊕ P(x)` on a window, with the per-vertex offsets of each summand.
fn proj_sum(q: &Quiver, wq: &Arc<WinQuiver>, xs: &[Vertex]) -> Option<(WindowRep, Vec<PathIndex>)> {
    let parts: Vec<WindowRep> = xs.iter().map(|&x| proj_on(q, wq, x)).collect();
    if !parts.iter().all(|p| p.is_canonical(q)) {
        return None;
    }
    let idx = xs.iter().map(|&x| PathIndex::from_paths(wq.paths_from(wq.idx(x).unwrap()))).collect();
    Some((sum_on(q, wq, &parts), idx))
}

fn inj_sum(q: &Quiver, wq: &Arc<WinQuiver>, xs: &[Vertex]) -> Option<(WindowRep, Vec<PathIndex>)> {
    let parts: Vec<WindowRep> = xs.iter().map(|&x| inj_on(q, wq, x)).collect();
    if !parts.iter().all(|p| p.is_canonical(q)) {
        return None;
    }
    let idx = xs.iter().map(|&x| PathIndex::from_paths(wq.paths_to(wq.idx(x).unwrap()))).collect();
    Some((sum_on(q, wq, &parts), idx))
}

fn sum_on(q: &Quiver, wq: &Arc<WinQuiver>, parts: &[WindowRep]) -> WindowRep {
    if parts.is_empty() {
        let f = q.field();
        let maps = wq.arrows.iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        return WindowRep::from_parts(q, wq.clone(), vec![0; wq.len()], maps);
    }
    WindowRep::direct_sum(q, parts)
}

/// Paths of one summand, grouped by the other endpoint, with reverse lookup.
struct PathIndex {
    paths: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl PathIndex {
    fn from_paths(paths: Vec<Vec<Vec<usize>>>) -> PathIndex {
        let lookup = paths.iter().map(|ps| ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect()).collect();
        PathIndex { paths, lookup }
    }

    fn count(&self, z: usize) -> usize {
        self.paths[z].len()
    }
}

fn offsets(idx: &[PathIndex], z: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(idx.len() + 1);
    let mut acc = 0;
    out.push(0);
    for p in idx {
        acc += p.count(z);
        out.push(acc);
    }
    out
}

/// Minimal projective presentation of a representation.
pub fn minimal_presentation(q: &Quiver, m: &Rep) -> Result<Presentation> {
    presentation_of(q, &m.realize(q)?)
}

pub fn presentation_of(q: &Quiver, m: &WindowRep) -> Result<Presentation> {
    Ok(pres_data(q, m)?.pres)
}

/// A presentation together with its matrices on one window.
struct PresData {
    pres: Presentation,
    wq: Arc<WinQuiver>,
    m: WindowRep,
    p0: WindowRep,
    p1: WindowRep,
    /// `P0 → M`.
    pi: Morphism,
    /// `P1 → P0`.
    f: Morphism,
    syz_index: Vec<PathIndex>,
}

fn not_fp(q: &Quiver, v: Vertex) -> Error {
    Error::NotFinitelyPresented(format!("infinitely generated along the tail through {}", q.vertex_name(v)))
}

fn pres_data(q: &Quiver, m: &WindowRep) -> Result<PresData> {
    fp_certificate(q, m).map_err(|v| not_fp(q, v))?;
    let tops: Vec<Vertex> = crate::rep::top_generators(q, m).iter().map(|(v, _)| m.wq().verts[*v]).collect();
    let (wq, m, p0, top_index) = grow_until(q, m.window(), &tops, |wq| {
        let (p0, idx) = proj_sum(q, wq, &tops)?;
        Some((wq.clone(), m.extend(q, &wq.window), p0, idx))
    });
    let f = q.field();
    // Generators recomputed on the final window (same tops, local indices).
    let gens = crate::rep::top_generators(q, &m);
    debug_assert_eq!(gens.len(), tops.len());
    let pi: Morphism = (0..wq.len())
        .map(|z| {
            let mut cols = Vec::new();
            for (i, (xi, g)) in gens.iter().enumerate() {
                let gm = Matrix::from_columns(f, m.dims[*xi], std::slice::from_ref(g));
                for rho in &top_index[i].paths[z] {
                    cols.push(m.path_map(rho, *xi).mul(&gm).column(0));
                }
            }
            Matrix::from_columns(f, m.dims[z], &cols)
        })
        .collect();
    for (z, p) in pi.iter().enumerate() {
        if p.rank() != m.dims[z] {
            return Err(not_fp(q, wq.verts[z]));
        }
    }
    let kers: Vec<Matrix> = pi.iter().map(|p| p.kernel()).collect();
    let k = p0.subrep(q, &kers);
    let mut syzygies = Vec::new();
    let mut columns = Vec::new();
    for (z, u) in crate::rep::top_generators(q, &k) {
        let uvec = kers[z].mul(&Matrix::from_columns(f, k.dims[z], &[u]));
        let off = offsets(&top_index, z);
        let mut terms = Vec::new();
        for r in 0..uvec.rows() {
            let c = uvec.get(r, 0);
            if c.is_zero() {
                continue;
            }
            let i = off.partition_point(|&o| o <= r) - 1;
            let path = top_index[i].paths[z][r - off[i]].iter().map(|&a| wq.arrows[a].0).collect();
            terms.push(PathTerm { row: i, path, coeff: c.clone() });
        }
        syzygies.push(wq.verts[z]);
        columns.push(terms);
    }
    let pres = Presentation { field: f, tops, syzygies, columns, window: wq.window.clone() };
    // P1 and the map f on the same window; grow if P1 is not canonical there.
    let Some((p1, syz_index)) = proj_sum(q, &wq, &pres.syzygies) else {
        let bigger =
            grow_until(q, &wq.window, &pres.syzygies, |w| proj_sum(q, w, &pres.syzygies).map(|_| w.window.clone()));
        return pres_data(q, &m.extend(q, &bigger));
    };
    let fm = presentation_map(&pres, &wq, &top_index, &syz_index, &p0, &p1);
    Ok(PresData { pres, wq, m, p0, p1, pi, f: fm, syz_index })
}

/// The map `⊕ P(y_j) → ⊕ P(x_i)` on a window: `(j, σ) ↦ Σ c · (i, ρσ)`.
fn presentation_map(
    pres: &Presentation,
    wq: &WinQuiver,
    top_index: &[PathIndex],
    syz_index: &[PathIndex],
    p0: &WindowRep,
    p1: &WindowRep,
) -> Morphism {
    let f = pres.field;
    let rhos: Vec<Vec<(usize, Vec<usize>, Scalar)>> = pres
        .columns
        .iter()
        .map(|col| col.iter().map(|t| (t.row, local_path(wq, &t.path), t.coeff.clone())).collect())
        .collect();
    (0..wq.len())
        .map(|z| {
            let mut mz = Matrix::zeros(f, p0.dims[z], p1.dims[z]);
            let off0 = offsets(top_index, z);
            let off1 = offsets(syz_index, z);
            for (j, col) in rhos.iter().enumerate() {
                for (s, sigma) in syz_index[j].paths[z].iter().enumerate() {
                    for (i, rho, c) in col {
                        let mut path = rho.clone();
                        path.extend_from_slice(sigma);
                        let r = off0[*i] + top_index[*i].lookup[z][&path];
                        let cur = mz.get(r, off1[j] + s).clone();
                        mz.set(r, off1[j] + s, f.add(&cur, c));
                    }
                }
            }
            mz
        })
        .collect()
}

/// The Nakayama functor on a presentation map: `⊕ I(y_j) → ⊕ I(x_i)`, where a
/// path `ρ: x ⇝ y` sends `δ_π` to `δ_τ` whenever `π = τρ`.
pub fn nakayama(q: &Quiver, pres: &Presentation, hint: &Window) -> (WindowRep, WindowRep, Morphism) {
    let anchors: Vec<Vertex> = pres.tops.iter().chain(&pres.syzygies).copied().collect();
    grow_until(q, &hint.union(&pres.window), &anchors, |wq| {
        let (src, syz_idx) = inj_sum(q, wq, &pres.syzygies)?;
        let (tgt, top_idx) = inj_sum(q, wq, &pres.tops)?;
        let map = nakayama_map(pres, wq, &top_idx, &syz_idx, &src, &tgt);
        Some((src, tgt, map))
    })
}

fn nakayama_map(
    pres: &Presentation,
    wq: &WinQuiver,
    top_idx: &[PathIndex],
    syz_idx: &[PathIndex],
    src: &WindowRep,
    tgt: &WindowRep,
) -> Morphism {
    let f = pres.field;
    (0..wq.len())
        .map(|z| {
            let mut mz = Matrix::zeros(f, tgt.dims[z], src.dims[z]);
            let off_t = offsets(top_idx, z);
            let off_s = offsets(syz_idx, z);
            for (j, col) in pres.columns.iter().enumerate() {
                for t in col {
                    let rho = local_path(wq, &t.path);
                    for (s, pi) in syz_idx[j].paths[z].iter().enumerate() {
                        if pi.len() < rho.len() || pi[pi.len() - rho.len()..] != rho[..] {
                            continue;
                        }
                        let tau = pi[..pi.len() - rho.len()].to_vec();
                        let r = off_t[t.row] + top_idx[t.row].lookup[z][&tau];
                        let cur = mz.get(r, off_s[j] + s).clone();
                        mz.set(r, off_s[j] + s, f.add(&cur, &t.coeff));
                    }
                }
            }
            mz
        })
        .collect()
}

/// `ν` on symbolic projectives: `ν(P_x) = I_x`.
pub fn nakayama_rep(m: &Rep) -> Result<Rep> {
    match m {
        Rep::Proj(x) => Ok(Rep::Inj(*x)),
        Rep::Sum(parts) => Ok(Rep::Sum(parts.iter().map(nakayama_rep).collect::<Result<_>>()?)),
        _ => Err(Error::NotProjective),
    }
}

/// `DTr` of the cokernel of a presentation: the kernel of its Nakayama image.
pub fn dtr_of_presentation(q: &Quiver, pres: &Presentation, hint: &Window) -> Result<WindowRep> {
    let anchors: Vec<Vertex> = pres.tops.iter().chain(&pres.syzygies).copied().collect();
    let hint = settle(q, hint);
    Ok(grow_until(q, &hint.union(&pres.window), &anchors, |wq| {
        let (src, syz_idx) = inj_sum(q, wq, &pres.syzygies)?;
        let (tgt, top_idx) = inj_sum(q, wq, &pres.tops)?;
        let map = nakayama_map(pres, wq, &top_idx, &syz_idx, &src, &tgt);
        let (k, _) = src.kernel_of(q, &map);
        k.is_canonical(q).then_some(k)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    DTr,
    TrD,
}

/// Result of an Auslander–Reiten translate.
#[derive(Clone, Debug)]
pub struct DtrResult {
    /// `None` means zero.
    pub value: Option<WindowRep>,
    pub is_finite_dimensional: bool,
    /// The translate is infinite dimensional.
    pub is_pseudo: bool,
    /// Per tail, the eventual dimension of the translate (its constant tail word).
    pub tail_certificate: Vec<usize>,
}

impl DtrResult {
    fn zero(q: &Quiver) -> DtrResult {
        DtrResult {
            value: None,
            is_finite_dimensional: true,
            is_pseudo: false,
            tail_certificate: vec![0; q.tails().len()],
        }
    }

    fn of(w: WindowRep) -> DtrResult {
        let cert = w.stable.clone();
        let fin = w.is_finite_dim();
        DtrResult {
            value: if w.is_zero() { None } else { Some(w) },
            is_finite_dimensional: fin,
            is_pseudo: !fin,
            tail_certificate: cert,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_none()
    }

    pub fn name(&self, q: &Quiver) -> String {
        match &self.value {
            None => "0".into(),
            Some(w) => describe(q, w),
        }
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "value": self.name(q),
            "zero": self.is_zero(),
            "dim_vector": self.value.as_ref().map(|w| w.dim_vector().to_json(q)),
            "is_finite_dimensional": self.is_finite_dimensional,
            "is_pseudo": self.is_pseudo,
            "tail_certificate": self.tail_certificate,
        })
    }
}

pub fn ar_translate(q: &Quiver, m: &Rep, dir: Direction) -> Result<DtrResult> {
    let w = m.realize(q)?;
    match dir {
        Direction::DTr => dtr_window(q, &w),
        Direction::TrD => trd_window(q, &w),
    }
}

pub fn dtr_window(q: &Quiver, m: &WindowRep) -> Result<DtrResult> {
    let pres = presentation_of(q, m)?;
    if pres.is_projective() {
        return Ok(DtrResult::zero(q));
    }
    Ok(DtrResult::of(dtr_of_presentation(q, &pres, m.window())?))
}

/// `TrD = D ∘ DTr ∘ D`, computed over the opposite quiver.
pub fn trd_window(q: &Quiver, m: &WindowRep) -> Result<DtrResult> {
    let qop = q.opposite();
    let dm = dualize_window(q, m);
    let r = dtr_window(&qop, &dm)?;
    Ok(match r.value {
        None => DtrResult::zero(q),
        Some(v) => DtrResult::of(v.dual(q)),
    })
}

pub fn is_projective(q: &Quiver, m: &WindowRep) -> Result<bool> {
    Ok(presentation_of(q, m)?.is_projective())
}

pub fn is_injective(q: &Quiver, m: &WindowRep) -> Result<bool> {
    let qop = q.opposite();
    Ok(presentation_of(&qop, &dualize_window(q, m))?.is_projective())
}

/// `(dim Hom(M, N), dim Ext¹(M, N))` from the presentation of `M`: the kernel
/// and cokernel of `⊕ N(x_i) → ⊕ N(y_j)`.
pub fn hom_ext_dims(q: &Quiver, m: &Rep, n: &Rep) -> Result<(usize, usize)> {
    let mw = m.realize(q)?;
    let pres = match presentation_of(q, &mw) {
        Ok(p) => p,
        Err(e @ Error::NotFinitelyPresented(_)) => {
            let nw = n.realize(q)?;
            let shared = mw.stable.iter().zip(&nw.stable).position(|(a, b)| *a > 0 && *b > 0);
            return Err(match shared {
                Some(t) => Error::UnboundedInteraction(format!("both are infinite along tail {t}")),
                None => e,
            });
        }
        Err(e) => return Err(e),
    };
    let nw = n.materialize(q, &pres.window)?;
    let delta = ext_matrix(&pres, &nw);
    let r = delta.rank();
    Ok((delta.cols() - r, delta.rows() - r))
}

/// `δ: ⊕ N(x_i) → ⊕ N(y_j)`, block `(j, i) = Σ c · N(ρ)`.
fn ext_matrix(pres: &Presentation, n: &WindowRep) -> Matrix {
    let f = pres.field;
    let wq = n.wq();
    let loc = |v: Vertex| wq.idx(v).expect("window covers the presentation");
    let col_off: Vec<usize> = pres
        .tops
        .iter()
        .scan(0, |acc, &x| {
            let o = *acc;
            *acc += n.dims[loc(x)];
            Some(o)
        })
        .collect();
    let row_off: Vec<usize> = pres
        .syzygies
        .iter()
        .scan(0, |acc, &y| {
            let o = *acc;
            *acc += n.dims[loc(y)];
            Some(o)
        })
        .collect();
    let ncols: usize = pres.tops.iter().map(|&x| n.dims[loc(x)]).sum();
    let nrows: usize = pres.syzygies.iter().map(|&y| n.dims[loc(y)]).sum();
    let mut d = Matrix::zeros(f, nrows, ncols);
    for (j, col) in pres.columns.iter().enumerate() {
        for t in col {
            let x = loc(pres.tops[t.row]);
            let block = n.path_map(&local_path(wq, &t.path), x).scale(&t.coeff);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    let (rr, cc) = (row_off[j] + r, col_off[t.row] + c);
                    let cur = d.get(rr, cc).clone();
                    d.set(rr, cc, f.add(&cur, block.get(r, c)));
                }
            }
        }
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    EndingAt,
    StartingAt,
}

/// `0 → L → E → M → 0`, all on one window, with `E` also given decomposed.
#[derive(Clone, Debug)]
pub struct ARSequence {
    pub left: WindowRep,
    pub middle: Vec<WindowRep>,
    pub right: WindowRep,
    pub middle_sum: WindowRep,
    /// `L → E`.
    pub f: Morphism,
    /// `E → M`.
    pub g: Morphism,
    /// `L → E_k` for each middle summand.
    pub left_maps: Vec<Morphism>,
    /// `E_k → M` for each middle summand.
    pub right_maps: Vec<Morphism>,
}

/// Outcome of the exactness audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Audit {
    pub dims_add: bool,
    pub composite_zero: bool,
    pub ranks: bool,
    pub morphisms: bool,
    pub non_split: bool,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.dims_add && self.composite_zero && self.ranks && self.morphisms && self.non_split
    }
}

impl ARSequence {
    pub fn audit(&self) -> Audit {
        let (l, e, m) = (&self.left, &self.middle_sum, &self.right);
        let nv = e.dims.len();
        let dims_add = (0..nv).all(|v| e.dims[v] == l.dims[v] + m.dims[v])
            && (0..e.stable.len()).all(|t| e.stable[t] == l.stable[t] + m.stable[t]);
        let composite_zero = compose(&self.g, &self.f).iter().all(|x| x.is_zero());
        let ranks = (0..nv).all(|v| self.f[v].rank() == l.dims[v] && self.g[v].rank() == m.dims[v]);
        let morphisms = l.is_morphism(e, &self.f) && e.is_morphism(m, &self.g);
        let non_split = !has_section(m, e, &self.g);
        Audit { dims_add, composite_zero, ranks, morphisms, non_split }
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        let named = |w: &WindowRep| json!({"name": describe(q, w), "dim_vector": w.dim_vector().to_json(q)});
        let audit = self.audit();
        json!({
            "left": named(&self.left),
            "middle": self.middle.iter().map(named).collect::<Vec<_>>(),
            "right": named(&self.right),
            "audit": {
                "dims_add": audit.dims_add,
                "composite_zero": audit.composite_zero,
                "ranks": audit.ranks,
                "morphisms": audit.morphisms,
                "non_split": audit.non_split,
            },
        })
    }
}

/// Whether `g: E → M` has a section, by a linear solve over `Hom(M, E)`.
fn has_section(m: &WindowRep, e: &WindowRep, g: &Morphism) -> bool {
    let f = m.field();
    let basis = hom_basis(m, e);
    if basis.is_empty() {
        return m.dims.iter().all(|&d| d == 0);
    }
    let comps: Vec<Morphism> = basis.iter().map(|s| compose(g, s)).collect();
    let a = span_matrix(f, &comps);
    let target = flatten(&m.identity());
    let b = Matrix::from_columns(f, target.len(), &[target]);
    a.solve(&b).is_some()
}

fn unavailable(u: Unavailable) -> Error {
    Error::Unavailable(u)
}

/// The almost split sequence ending at (or starting at) an indecomposable.
pub fn almost_split(q: &Quiver, m: &Rep, side: Side) -> Result<ARSequence> {
    let w = m.realize(q)?;
    match side {
        Side::EndingAt => ending_at(q, &w),
        Side::StartingAt => starting_at(q, &w),
    }
}

pub fn ending_at(q: &Quiver, m: &WindowRep) -> Result<ARSequence> {
    if !is_indecomposable(q, m)? {
        return Err(unavailable(Unavailable::NotIndecomposable));
    }
    let pres = presentation_of(q, m)?;
    if pres.is_projective() {
        return Err(unavailable(Unavailable::Projective));
    }
    let l = dtr_of_presentation(q, &pres, m.window())?;
    if !l.is_finite_dim() {
        return Err(unavailable(Unavailable::PseudoProjective));
    }
    build_sequence(q, m, &l)
}

pub fn starting_at(q: &Quiver, n: &WindowRep) -> Result<ARSequence> {
    if !n.is_finite_dim() {
        return Err(unavailable(Unavailable::InfiniteDimStart));
    }
    if !is_indecomposable(q, n)? {
        return Err(unavailable(Unavailable::NotIndecomposable));
    }
    let t = trd_window(q, n)?;
    let Some(m) = t.value else {
        return Err(unavailable(Unavailable::Injective));
    };
    build_sequence(q, &m, n)
}

/// Builds the almost split sequence ending at `m`, given `l ≅ DTr m`: the
/// extension class is a non-zero element of the socle of `Ext¹(M, L)` as an
/// `End(L)`-module, realised as a pushout of the presentation.
fn build_sequence(q: &Quiver, m: &WindowRep, l: &WindowRep) -> Result<ARSequence> {
    let f = q.field();
    let w = m.window().union(l.window());
    let data = pres_data(q, &m.extend(q, &w))?;
    let data = if data.wq.window.includes(l.window()) { data } else { pres_data(q, &data.m.extend(q, l.window()))? };
    let PresData { pres, wq, m, p0, p1, pi, f: fmap, syz_index } = data;
    let l = l.extend(q, &wq.window);
    debug_assert!(l.window() == m.window());
    let loc = |v: Vertex| wq.idx(v).unwrap();

    // Ext¹(M, L) = V / U.
    let delta = ext_matrix(&pres, &l);
    let coker = delta.cokernel();
    if coker.rows() == 0 {
        return Err(Error::NotFinitelyPresented("Ext¹(M, τM) vanishes".into()));
    }
    let nv_dim = delta.rows();
    let mut stack = Matrix::zeros(f, 0, nv_dim);
    for phi in end_radical(&l)? {
        let blocks: Vec<Matrix> = pres.syzygies.iter().map(|&y| phi[loc(y)].clone()).collect();
        stack = stack.vstack(&coker.mul(&Matrix::block_diag(f, &blocks)));
    }
    let soc = if stack.rows() == 0 { Matrix::identity(f, nv_dim) } else { stack.kernel() };
    let xi =
        (0..soc.cols()).map(|c| soc.select_cols(&[c])).find(|x| !coker.mul(x).is_zero()).ok_or(Error::Undecided)?;

    // ξ-part of P1 → L: (j, σ) ↦ L(σ) ξ_j.
    let mut xi_off = 0;
    let xis: Vec<Matrix> = pres
        .syzygies
        .iter()
        .map(|&y| {
            let d = l.dims[loc(y)];
            let part = xi.select_rows(&(xi_off..xi_off + d).collect::<Vec<_>>());
            xi_off += d;
            part
        })
        .collect();
    let xi_map: Morphism = (0..wq.len())
        .map(|z| {
            let mut cols = Vec::new();
            for (j, &y) in pres.syzygies.iter().enumerate() {
                for sigma in &syz_index[j].paths[z] {
                    cols.push(l.path_map(sigma, loc(y)).mul(&xis[j]).column(0));
                }
            }
            Matrix::from_columns(f, l.dims[z], &cols)
        })
        .collect();
    let _ = &p1;

    // E = (L ⊕ P0) / {(ξ(p), −f(p))}.
    let x = WindowRep::direct_sum(q, &[l.clone(), p0.clone()]);
    let bases: Vec<Matrix> = (0..wq.len()).map(|z| xi_map[z].vstack(&fmap[z].neg()).image_basis()).collect();
    let (e, proj, sect) = x.quotient_full(q, &bases);
    let fm: Morphism = (0..wq.len())
        .map(|z| proj[z].mul(&Matrix::identity(f, l.dims[z]).vstack(&Matrix::zeros(f, p0.dims[z], l.dims[z]))))
        .collect();
    let gm: Morphism =
        (0..wq.len()).map(|z| Matrix::zeros(f, m.dims[z], l.dims[z]).hstack(&pi[z]).mul(&sect[z])).collect();
    let parts = decompose_with_maps(q, &e);
    let left_maps = parts.iter().map(|s| compose(&s.proj, &fm)).collect();
    let right_maps = parts.iter().map(|s| compose(&gm, &s.incl)).collect();
    Ok(ARSequence {
        left: l,
        middle: parts.into_iter().map(|s| s.rep).collect(),
        right: m,
        middle_sum: e,
        f: fm,
        g: gm,
        left_maps,
        right_maps,
    })
}

/// A basis of the radical of the local algebra `End(L)`.
///
/// When the residue field is the ground field every endomorphism is
/// `λ + nilpotent`; otherwise the radical is the kernel of the trace form
/// (characteristic zero) or the span of the non-units (small finite fields).
fn end_radical(l: &WindowRep) -> Result<Vec<Morphism>> {
    let f = l.field();
    let basis = end_basis(l);
    let n = basis.len();
    let id = l.identity();
    let mut rad = Vec::new();
    let mut split_residue = true;
    for phi in &basis {
        let mp = min_poly(&total_matrix(f, phi));
        let roots = mp.roots();
        let Some(lam) = roots.first() else {
            split_residue = false;
            break;
        };
        let r: Morphism = phi.iter().zip(&id).map(|(a, i)| a.sub(&i.scale(lam))).collect();
        let total = total_matrix(f, &r);
        if !total.pow(total.rows().max(1) as u32).is_zero() {
            split_residue = false;
            break;
        }
        rad.push(r);
    }
    if split_residue {
        let piv = span_matrix(f, &rad).echelon().pivots;
        if piv.len() + 1 == n {
            return Ok(piv.into_iter().map(|i| rad[i].clone()).collect());
        }
    }
    match f {
        Field::Rational => {
            let mut gram = Matrix::zeros(f, n, n);
            for a in 0..n {
                for b in 0..n {
                    gram.set(a, b, total_matrix(f, &compose(&basis[a], &basis[b])).trace());
                }
            }
            let k = gram.kernel();
            Ok((0..k.cols()).map(|c| lin_comb(f, &basis, &k.column(c))).collect())
        }
        Field::Prime(p) => {
            if (n as f64) * (p as f64).log2() > 16.0 {
                return Err(Error::Undecided);
            }
            let elems: Vec<Scalar> = (0..p).map(|v| f.from_i64(v as i64)).collect();
            let mut non_units = Vec::new();
            let mut idx = vec![0usize; n];
            loop {
                let coeffs: Vec<Scalar> = idx.iter().map(|&i| elems[i].clone()).collect();
                let phi = lin_comb(f, &basis, &coeffs);
                if !phi.iter().all(|x| x.is_invertible()) {
                    non_units.push(phi);
                }
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < elems.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
            let piv = span_matrix(f, &non_units).echelon().pivots;
            Ok(piv.into_iter().map(|i| non_units[i].clone()).collect())
        }
    }
}

/// Minimal almost split maps: into `M` (right) or out of `M` (left).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapSide {
    Into,
    OutOf,
}

/// The summands `X_k` with their components `X_k → M` (into) or `M → X_k` (out of).
#[derive(Clone, Debug)]
pub struct AlmostSplitMap {
    pub base: WindowRep,
    pub summands: Vec<WindowRep>,
    pub maps: Vec<Morphism>,
}

impl AlmostSplitMap {
    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "base": describe(q, &self.base),
            "summands": self.summands.iter().map(|s| json!({
                "name": describe(q, s),
                "dim_vector": s.dim_vector().to_json(q),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn mras(q: &Quiver, m: &Rep, side: MapSide) -> Result<AlmostSplitMap> {
    let w = m.realize(q)?;
    if !is_indecomposable(q, &w)? {
        return Err(unavailable(Unavailable::NotIndecomposable));
    }
    match side {
        MapSide::Into => {
            if is_projective(q, &w)? {
                let (rad, bases) = radical(q, &w);
                let parts = decompose_with_maps(q, &rad);
                let maps = parts.iter().map(|s| compose(&bases, &s.incl)).collect();
                return Ok(AlmostSplitMap { base: w, summands: parts.into_iter().map(|s| s.rep).collect(), maps });
            }
            let s = ending_at(q, &w)?;
            Ok(AlmostSplitMap { base: s.right, summands: s.middle, maps: s.right_maps })
        }
        MapSide::OutOf => {
            let injective = is_injective(q, &w).unwrap_or(false);
            if injective {
                let bases = socle_bases(q, &w);
                let (quot, proj) = w.quotient(q, &bases);
                let parts = decompose_with_maps(q, &quot);
                let maps = parts.iter().map(|s| compose(&s.proj, &proj)).collect();
                return Ok(AlmostSplitMap { base: w, summands: parts.into_iter().map(|s| s.rep).collect(), maps });
            }
            let s = starting_at(q, &w)?;
            Ok(AlmostSplitMap { base: s.left, summands: s.middle, maps: s.left_maps })
        }
    }
}
