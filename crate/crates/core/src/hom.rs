//! Morphism spaces, endomorphism algebras, decomposition and isomorphism tests.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::poly::{min_poly, Poly};
use crate::quiver::Quiver;
use crate::rep::{Morphism, Rep, WindowRep};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_a11c;

/// A basis of `Hom(M, N)`. Both representations must live on the same window;
/// on canonical windows this is the full morphism space.
pub fn hom_basis(m: &WindowRep, n: &WindowRep) -> Vec<Morphism> {
    assert_eq!(m.window(), n.window(), "hom_basis needs a common window");
    let f = m.field();
    let wq = m.wq();
    let nv = wq.len();
    // Variable blocks: f_v is dims_n[v] × dims_m[v], row-major.
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + m.dims[v] * n.dims[v];
    }
    let nvars = offset[nv];
    if nvars == 0 {
        return vec![];
    }
    let var = |v: usize, r: usize, c: usize| offset[v] + r * m.dims[v] + c;
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (k, &(_, s, t)) in wq.arrows.iter().enumerate() {
        let (ma, na) = (&m.maps[k], &n.maps[k]);
        // f_t · M(a) − N(a) · f_s = 0, entry (r, c) with r < n_t, c < m_s.
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                let mut row = Vec::new();
                for j in 0..m.dims[t] {
                    let x = ma.get(j, c);
                    if !x.is_zero() {
                        row.push((var(t, r, j), x.clone()));
                    }
                }
                for j in 0..n.dims[s] {
                    let x = na.get(r, j);
                    if !x.is_zero() {
                        row.push((var(s, j, c), f.neg(x)));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let mut a = Matrix::zeros(f, rows.len(), nvars);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row {
            let cur = a.get(i, j).clone();
            a.set(i, j, f.add(&cur, &x));
        }
    }
    let ker = a.kernel();
    (0..ker.cols())
        .map(|b| {
            (0..nv).map(|v| Matrix::from_fn(f, n.dims[v], m.dims[v], |r, c| ker.get(var(v, r, c), b).clone())).collect()
        })
        .collect()
}

/// `dim Hom(M, N)` for two materialised representations.
pub fn hom_dim(q: &Quiver, m: &WindowRep, n: &WindowRep) -> usize {
    let [m, n]: [WindowRep; 2] = WindowRep::align(q, &[m, n]).try_into().unwrap();
    hom_basis(&m, &n).len()
}

pub fn end_basis(m: &WindowRep) -> Vec<Morphism> {
    hom_basis(m, m)
}

pub(crate) fn lin_comb(f: Field, basis: &[Morphism], coeffs: &[Scalar]) -> Morphism {
    let mut out: Morphism = basis[0].iter().map(|b| Matrix::zeros(f, b.rows(), b.cols())).collect();
    for (phi, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(phi) {
            *o = o.add(&p.scale(c));
        }
    }
    out
}

fn add_morph(a: &Morphism, b: &Morphism) -> Morphism {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub(crate) fn is_iso(phi: &Morphism) -> bool {
    phi.iter().all(|m| m.is_invertible())
}

/// Block-diagonal matrix of an endomorphism (finite window part).
pub(crate) fn total_matrix(f: Field, phi: &Morphism) -> Matrix {
    Matrix::block_diag(f, phi)
}

fn eval_poly(p: &Poly, m: &Matrix) -> Matrix {
    let f = m.field();
    let n = m.rows();
    let mut acc = Matrix::zeros(f, n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add(&Matrix::identity(f, n).scale(c));
    }
    acc
}

/// A proper factor `g` of the minimal polynomial coprime to `mp / g^∞`, if any.
fn coprime_factor(mp: &Poly) -> Option<Poly> {
    let f = mp.field();
    let sqfree = {
        let g = mp.gcd(&mp.derivative());
        if g.degree() == 0 || mp.derivative().is_zero() {
            mp.clone()
        } else {
            mp.divrem(&g).0.monic()
        }
    };
    if sqfree.degree() <= 1 {
        return None;
    }
    if let Some(r) = mp.roots().first() {
        return Some(Poly::new(f, vec![f.neg(r), f.one()]));
    }
    if let Field::Prime(p) = f {
        // Distinct-degree factorisation of the squarefree part.
        let x = Poly::x(f);
        let mut xp = x.clone();
        for _ in 1..=sqfree.degree() / 2 {
            xp = xp.powmod(num_bigint::BigInt::from(p), &sqfree);
            let g = sqfree.gcd(&xp.sub(&x));
            if g.degree() > 0 && g.degree() < sqfree.degree() {
                return Some(g);
            }
        }
    }
    None
}

/// Fitting decomposition along `g(φ)`: the bases of `ker g(φ)^N` and
/// `im g(φ)^N` at every vertex; `None` if the split is trivial.
fn fitting_split(m: &WindowRep, phi: &Morphism) -> Option<(Vec<Matrix>, Vec<Matrix>)> {
    let f = m.field();
    let mp = min_poly(&total_matrix(f, phi));
    let g = coprime_factor(&mp)?;
    let mut kers = Vec::new();
    let mut ims = Vec::new();
    for (v, pv) in phi.iter().enumerate() {
        let d = m.dims[v] as u32;
        let psi = eval_poly(&g, pv).pow(d.max(1));
        kers.push(psi.kernel());
        ims.push(psi.image_basis());
    }
    let k_dim: usize = kers.iter().map(|k| k.cols()).sum();
    let i_dim: usize = ims.iter().map(|k| k.cols()).sum();
    if k_dim == 0 || i_dim == 0 {
        return None;
    }
    Some((kers, ims))
}

/// Candidate endomorphisms: basis, pairwise sums, then seeded random combinations.
fn candidates(f: Field, basis: &[Morphism], random: usize) -> Vec<Morphism> {
    let mut out: Vec<Morphism> = basis.to_vec();
    let lim = basis.len().min(8);
    for i in 0..lim {
        for j in i + 1..lim {
            out.push(add_morph(&basis[i], &basis[j]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool = f.small_elements(16);
    for _ in 0..random {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        out.push(lin_comb(f, basis, &coeffs));
    }
    out
}

/// Splits off a direct summand when `End(M)` is not local.
fn split_once(m: &WindowRep) -> Option<(Vec<Matrix>, Vec<Matrix>)> {
    let basis = end_basis(m);
    if basis.len() <= 1 {
        return None;
    }
    candidates(m.field(), &basis, 12).iter().find_map(|phi| fitting_split(m, phi))
}

fn sort_key(m: &WindowRep) -> (usize, Vec<usize>, Vec<usize>) {
    (m.total_dim().unwrap_or(usize::MAX), m.stable.clone(), m.dims.clone())
}

/// An indecomposable summand together with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub rep: WindowRep,
    pub incl: Morphism,
    pub proj: Morphism,
}

/// Indecomposable summands, ordered by (total dimension, dimension vector).
pub fn decompose(q: &Quiver, m: &WindowRep) -> Vec<WindowRep> {
    decompose_with_maps(q, m).into_iter().map(|s| s.rep).collect()
}

/// Like [`decompose`], keeping `ι_k : X_k → M` and `π_k : M → X_k` with
/// `Σ ι_k π_k = 1`.
pub fn decompose_with_maps(q: &Quiver, m: &WindowRep) -> Vec<Summand> {
    let f = m.field();
    let mut todo: Vec<(WindowRep, Vec<Matrix>)> = vec![(m.clone(), m.identity())];
    let mut done: Vec<(WindowRep, Vec<Matrix>)> = Vec::new();
    while let Some((x, incl)) = todo.pop() {
        if x.is_zero() {
            continue;
        }
        match split_once(&x) {
            Some((a, b)) => {
                for bases in [a, b] {
                    let sub = x.subrep(q, &bases);
                    let inc: Vec<Matrix> = incl.iter().zip(&bases).map(|(i, b)| i.mul(b)).collect();
                    todo.push((sub, inc));
                }
            }
            None => done.push((x, incl)),
        }
    }
    done.sort_by_key(|(x, _)| sort_key(x));
    // Projections: coordinates with respect to the concatenated inclusion bases.
    let nv = m.dims.len();
    let mut projs: Vec<Vec<Matrix>> = vec![Vec::new(); done.len()];
    for v in 0..nv {
        let full = done.iter().fold(Matrix::zeros(f, m.dims[v], 0), |acc, (_, i)| acc.hstack(&i[v]));
        let inv = full.inverse().expect("summand bases span");
        let mut r0 = 0;
        for (k, (x, _)) in done.iter().enumerate() {
            let rows: Vec<usize> = (r0..r0 + x.dims[v]).collect();
            projs[k].push(inv.select_rows(&rows));
            r0 += x.dims[v];
        }
    }
    done.into_iter().zip(projs).map(|((rep, incl), proj)| Summand { rep, incl, proj }).collect()
}

pub(crate) fn flatten(phi: &Morphism) -> Vec<Scalar> {
    phi.iter().flat_map(|x| (0..x.rows()).flat_map(move |r| (0..x.cols()).map(move |c| x.get(r, c).clone()))).collect()
}

pub(crate) fn span_matrix(f: Field, ms: &[Morphism]) -> Matrix {
    let cols: Vec<Vec<Scalar>> = ms.iter().map(flatten).collect();
    let len = cols.first().map_or(0, |c| c.len());
    Matrix::from_columns(f, len, &cols)
}

/// Certified locality test for `End(M)`: every basis element is a scalar plus
/// a nilpotent, and those nilpotent parts span a nilpotent ideal of codimension one.
pub fn is_indecomposable(_q: &Quiver, m: &WindowRep) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let f = m.field();
    let basis = end_basis(m);
    let mut rad = Vec::new();
    for phi in &basis {
        let mp = min_poly(&total_matrix(f, phi));
        if coprime_factor(&mp).is_some() {
            return Ok(false);
        }
        match mp.roots().first() {
            Some(l) => {
                let id: Morphism = m.identity();
                rad.push(phi.iter().zip(&id).map(|(a, i)| a.sub(&i.scale(l))).collect::<Morphism>());
            }
            // Residue field larger than k: fall back to the splitting search.
            None => return Ok(split_once(m).is_none()),
        }
    }
    // The nilpotent parts must span a nilpotent subspace of codimension one.
    let span = |ms: &[Morphism]| span_matrix(f, ms);
    let r = span(&rad).image_basis();
    if r.cols() + 1 != basis.len() {
        return Ok(false);
    }
    let r_basis: Vec<Morphism> = {
        let idx = span(&rad).echelon().pivots;
        idx.into_iter().map(|i| rad[i].clone()).collect()
    };
    let mut power = r_basis.clone();
    for _ in 0..=m.dims.iter().sum::<usize>() {
        if power.is_empty() {
            return Ok(true);
        }
        let prods: Vec<Morphism> = power
            .iter()
            .flat_map(|a| r_basis.iter().map(move |b| crate::rep::compose(a, b)))
            .filter(|p| p.iter().any(|x| !x.is_zero()))
            .collect();
        if prods.is_empty() {
            return Ok(true);
        }
        let sp = span(&prods);
        let piv = sp.echelon().pivots;
        if piv.len() >= power.len() {
            return Ok(split_once(m).is_none());
        }
        power = piv.into_iter().map(|i| prods[i].clone()).collect();
    }
    Ok(split_once(m).is_none())
}

/// Whether the class of the quiver makes dimension vectors decisive.
fn dims_decide(q: &Quiver) -> bool {
    q.classify().is_ok_and(|c| c.is_dynkin())
}

/// Isomorphism of indecomposables. On (infinite) Dynkin quivers dimension
/// vectors decide; otherwise an invertible morphism is searched for.
pub fn is_isomorphic(q: &Quiver, a: &Rep, b: &Rep) -> Result<bool> {
    let ma = a.realize(q)?;
    let mb = b.realize(q)?;
    is_isomorphic_window(q, &ma, &mb)
}

pub fn is_isomorphic_window(q: &Quiver, a: &WindowRep, b: &WindowRep) -> Result<bool> {
    let [a, b]: [WindowRep; 2] = WindowRep::align(q, &[a, b]).try_into().unwrap();
    if a.dims != b.dims || a.stable != b.stable {
        return Ok(false);
    }
    if dims_decide(q) {
        return Ok(true);
    }
    let basis = hom_basis(&a, &b);
    if basis.is_empty() {
        return Ok(false);
    }
    if candidates(a.field(), &basis, 48).iter().any(is_iso) {
        return Ok(true);
    }
    Err(Error::Undecided)
}
