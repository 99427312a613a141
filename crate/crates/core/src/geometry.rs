//! Bounded polytopes held as halfspaces and vertices at once, polar bodies,
//! vertex enumeration and boundary-pulling triangulation.
//!
//! Every [`Polytope`] keeps an incidence table (facet -> vertices tight on it).
//! Polar bodies are built from that table directly: the vertex of `K°(x)`
//! dual to facet `a·z <= b` is `a / (b - a·x)`, and the polar's facet/vertex
//! incidence is the transpose of `K`'s. No enumeration is needed per point,
//! and the polar's combinatorics (hence its triangulation) do not depend on
//! `x`.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, factorial, Scalar};

/// Numeric tolerances for floating-point predicates. Ignored in exact mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `x` is interior iff `b_i - a_i·x >= interior * (1 + |b_i|)` for unit `a_i`.
    pub interior: f64,
    /// Residual allowed when testing feasibility and tightness.
    pub feasibility: f64,
    /// Relative pivot threshold for rank decisions.
    pub rank: f64,
    /// Relative distance under which two vertices are merged.
    pub merge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { interior: 1e-9, feasibility: 1e-9, rank: 1e-10, merge: 1e-9 }
    }
}

/// `normal · z <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S = f64> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Self {
        Self { normal, offset }
    }

    /// `offset - normal·z`; positive inside.
    pub fn slack(&self, z: &[S]) -> S {
        self.offset.clone() - dot(&self.normal, z)
    }

    fn residual_scale(&self, z: &[S]) -> f64 {
        1.0 + self.offset.to_f64().abs()
            + self
                .normal
                .iter()
                .zip(z)
                .map(|(a, v)| (a.to_f64() * v.to_f64()).abs())
                .sum::<f64>()
    }

    fn is_tight(&self, z: &[S], eps: f64) -> bool {
        self.slack(z).is_negligible(eps, self.residual_scale(z))
    }

    fn is_satisfied(&self, z: &[S], eps: f64) -> bool {
        let s = self.slack(z);
        s >= S::zero() || s.is_negligible(eps, self.residual_scale(z))
    }

    fn normalized(self) -> Self {
        if S::EXACT {
            return self;
        }
        let norm = self.normal.iter().map(|a| a.to_f64().powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return self;
        }
        let inv = S::from_f64(1.0 / norm);
        Self {
            normal: self.normal.into_iter().map(|a| a * inv.clone()).collect(),
            offset: self.offset * inv,
        }
    }
}

/// A full-dimensional simplex (or a flagged degenerate one) in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex<S = f64> {
    pub verts: Vec<Vec<S>>,
}

impl<S: Scalar> Simplex<S> {
    pub fn new(verts: Vec<Vec<S>>) -> Self {
        Self { verts }
    }

    pub fn dim(&self) -> usize {
        self.verts.len().saturating_sub(1)
    }

    fn edge_matrix(&self) -> Vec<Vec<S>> {
        let v0 = &self.verts[0];
        self.verts[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect()
    }

    /// Determinant of the edge matrix `[v_1 - v_0, ..., v_n - v_0]`.
    pub fn edge_determinant(&self) -> S {
        linalg::determinant(&self.edge_matrix())
    }

    /// Degenerate when `|det| < 1e-14 * prod |v_i - v_0|` (floats) or `det == 0`.
    pub fn is_degenerate(&self) -> bool {
        let det = self.edge_determinant();
        let scale: f64 = self
            .edge_matrix()
            .iter()
            .map(|e| e.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt())
            .product();
        det.is_negligible(1e-14, scale)
    }

    /// Lebesgue measure; zero for degenerate simplices.
    pub fn volume(&self) -> S {
        if self.is_degenerate() {
            return S::zero();
        }
        self.edge_determinant().abs() / S::from_i64(factorial(self.dim()))
    }
}

/// Bounded, full-dimensional polytope in H- and V-representation.
#[derive(Clone, Debug)]
pub struct Polytope<S = f64> {
    dim: usize,
    halfspaces: Vec<Halfspace<S>>,
    vertices: Vec<Vec<S>>,
    /// `incidence[i]`: sorted indices of vertices tight on facet `i`.
    incidence: Vec<Vec<usize>>,
    cells: Arc<OnceLock<Vec<Vec<usize>>>>,
}

impl<S: Scalar> Polytope<S> {
    /// Builds from halfspaces; enumerates vertices and drops redundant rows.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace<S>>, tol: &Tolerances) -> Result<Self> {
        check_dims(dim, halfspaces.iter().map(|h| h.normal.len()))?;
        let halfspaces: Vec<_> = halfspaces.into_iter().map(Halfspace::normalized).collect();
        let vertices = enumerate_vertices(dim, &halfspaces, tol)?;
        Self::assemble(dim, halfspaces, vertices, tol)
    }

    /// Builds from a point cloud; keeps extreme points and derives facets.
    pub fn from_vertices(dim: usize, points: Vec<Vec<S>>, tol: &Tolerances) -> Result<Self> {
        check_dims(dim, points.iter().map(Vec::len))?;
        let points = dedupe_points(points, tol.merge);
        check_full_dimensional(dim, &points, tol)?;
        let halfspaces = facets_of_points(dim, &points, tol);
        let extreme: Vec<Vec<S>> = points
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<S>> = halfspaces
                    .iter()
                    .filter(|h| h.is_tight(p, tol.feasibility))
                    .map(|h| h.normal.clone())
                    .collect();
                linalg::rank(&tight, tol.rank) == dim
            })
            .collect();
        Self::assemble(dim, halfspaces, extreme, tol)
    }

    fn assemble(dim: usize, halfspaces: Vec<Halfspace<S>>, vertices: Vec<Vec<S>>, tol: &Tolerances) -> Result<Self> {
        check_full_dimensional(dim, &vertices, tol)?;
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        let mut incidence = Vec::new();
        for h in halfspaces {
            let tight: Vec<usize> = (0..vertices.len())
                .filter(|&j| h.is_tight(&vertices[j], tol.feasibility))
                .collect();
            if tight.len() < dim || seen.contains(&tight) {
                continue;
            }
            let pts: Vec<&Vec<S>> = tight.iter().map(|&j| &vertices[j]).collect();
            if affine_rank(&pts, tol) + 1 != dim {
                continue;
            }
            seen.insert(tight.clone());
            kept.push(h);
            incidence.push(tight);
        }
        Ok(Self { dim, halfspaces: kept, vertices, incidence, cells: Arc::default() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Irredundant facet inequalities.
    pub fn halfspaces(&self) -> &[Halfspace<S>] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Average of the vertices; always interior.
    pub fn vertex_centroid(&self) -> Vec<S> {
        let m = S::from_i64(self.vertices.len() as i64);
        (0..self.dim)
            .map(|j| {
                self.vertices
                    .iter()
                    .fold(S::zero(), |acc, v| acc + v[j].clone())
                    / m.clone()
            })
            .collect()
    }

    /// Strict interiority with the configured margin.
    pub fn check_interior(&self, x: &[S], tol: &Tolerances) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::InvalidInput(format!("point has {} coordinates, expected {}", x.len(), self.dim)));
        }
        for (index, h) in self.halfspaces.iter().enumerate() {
            let slack = h.slack(x);
            let ok = if S::EXACT {
                slack.is_positive()
            } else {
                slack.to_f64() >= tol.interior * (1.0 + h.offset.to_f64().abs())
            };
            if !ok {
                return Err(Error::NotInterior { index, slack: slack.to_f64() });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[S], tol: &Tolerances) -> bool {
        self.halfspaces.iter().all(|h| h.is_satisfied(x, tol.feasibility))
    }

    /// Smallest slack over facets, in units of the (unit) facet normals.
    pub fn distance_to_boundary(&self, x: &[S]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| {
                let n = h.normal.iter().map(|a| a.to_f64().powi(2)).sum::<f64>().sqrt();
                h.slack(x).to_f64() / n
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Boundary triangulation as vertex-index tuples of length `dim`: every
    /// facet pulled recursively from its first vertex. Cached.
    pub fn boundary_cells(&self, tol: &Tolerances) -> &[Vec<usize>] {
        self.cells.get_or_init(|| {
            let mut out = Vec::new();
            for facet in &self.incidence {
                pull_face(self, facet, self.dim - 1, &mut Vec::new(), &mut out, tol);
            }
            out
        })
    }

    /// Same combinatorics, new coordinates (used for polars, whose face
    /// lattice does not move with the reference point).
    pub(crate) fn with_coordinates(&self, halfspaces: Vec<Halfspace<S>>, vertices: Vec<Vec<S>>) -> Self {
        Self {
            dim: self.dim,
            halfspaces,
            vertices,
            incidence: self.incidence.clone(),
            cells: Arc::clone(&self.cells),
        }
    }

    /// Converts to `f64` (or any other scalar) through `f64`.
    pub fn map_scalar<T: Scalar>(&self) -> Polytope<T> {
        Polytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.iter().map(|a| T::from_f64(a.to_f64())).collect(), T::from_f64(h.offset.to_f64())))
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|a| T::from_f64(a.to_f64())).collect())
                .collect(),
            incidence: self.incidence.clone(),
            cells: Arc::default(),
        }
    }

    /// Axis-aligned bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for j in 0..self.dim {
                let x = v[j].to_f64();
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        (lo, hi)
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, u) in self.vertices.iter().enumerate() {
            for v in &self.vertices[i + 1..] {
                let s: f64 = u.iter().zip(v).map(|(a, b)| (a.to_f64() - b.to_f64()).powi(2)).sum();
                d = d.max(s.sqrt());
            }
        }
        d
    }
}

fn check_dims(dim: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    for l in lens {
        if l != dim {
            return Err(Error::InvalidInput(format!("vector of length {l} in dimension {dim}")));
        }
    }
    Ok(())
}

fn affine_rank<S: Scalar>(pts: &[&Vec<S>], tol: &Tolerances) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let base = pts[0];
    let rows: Vec<Vec<S>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    linalg::rank(&rows, tol.rank)
}

fn check_full_dimensional<S: Scalar>(dim: usize, pts: &[Vec<S>], tol: &Tolerances) -> Result<()> {
    let refs: Vec<&Vec<S>> = pts.iter().collect();
    let rank = affine_rank(&refs, tol);
    if rank < dim {
        return Err(Error::DimensionDeficient { rank, dim });
    }
    Ok(())
}

fn points_close<S: Scalar>(a: &[S], b: &[S], eps: f64) -> bool {
    let scale = 1.0 + a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible(eps, scale))
}

fn dedupe_points<S: Scalar>(points: Vec<Vec<S>>, eps: f64) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| points_close(q, &p, eps)) {
            out.push(p);
        }
    }
    out
}

/// Visits every `k`-subset of `0..m` in lexicographic order.
pub(crate) fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Basic solutions of `n` active constraints that satisfy every constraint,
/// deduplicated. No boundedness check.
fn basic_feasible_points<S: Scalar>(dim: usize, hs: &[Halfspace<S>], tol: &Tolerances) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    for_each_combination(hs.len(), dim, |sub| {
        let a: Vec<Vec<S>> = sub.iter().map(|&i| hs[i].normal.clone()).collect();
        let b: Vec<S> = sub.iter().map(|&i| hs[i].offset.clone()).collect();
        let Some(z) = linalg::solve(&a, &b, tol.rank) else { return };
        if hs.iter().all(|h| h.is_satisfied(&z, tol.feasibility)) && !out.iter().any(|q| points_close(q, &z, tol.merge)) {
            out.push(z);
        }
    });
    out
}

/// Exact vertex set of a bounded full-dimensional halfspace system, by
/// exhaustive `n`-subset solving (`O(C(m, n) n^3)`).
///
/// Boundedness is probed first: the recession cone `{d : a_i·d <= 0}` clipped
/// to the box `|d_j| <= 1` must reduce to the origin.
pub fn enumerate_vertices<S: Scalar>(dim: usize, hs: &[Halfspace<S>], tol: &Tolerances) -> Result<Vec<Vec<S>>> {
    check_dims(dim, hs.iter().map(|h| h.normal.len()))?;
    let mut cone: Vec<Halfspace<S>> = hs.iter().map(|h| Halfspace::new(h.normal.clone(), S::zero())).collect();
    for j in 0..dim {
        for sign in [1, -1] {
            let mut e = vec![S::zero(); dim];
            e[j] = S::from_i64(sign);
            cone.push(Halfspace::new(e, S::one()));
        }
    }
    for d in basic_feasible_points(dim, &cone, tol) {
        if !d.iter().all(|x| x.is_negligible(tol.merge, 1.0)) {
            return Err(Error::Unbounded { direction: d.iter().map(Scalar::to_f64).collect() });
        }
    }
    let verts = basic_feasible_points(dim, hs, tol);
    if verts.is_empty() {
        return Err(Error::Infeasible);
    }
    Ok(verts)
}

/// Facet inequalities of `conv(points)` by testing every affinely independent
/// `n`-subset of points as a supporting hyperplane.
fn facets_of_points<S: Scalar>(dim: usize, points: &[Vec<S>], tol: &Tolerances) -> Vec<Halfspace<S>> {
    let scale = 1.0
        + points
            .iter()
            .flat_map(|p| p.iter())
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_combination(points.len(), dim, |sub| {
        let base = &points[sub[0]];
        let rows: Vec<Vec<S>> = sub[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        let normal = if dim == 1 {
            Some(vec![S::one()])
        } else {
            linalg::normal_vector(&rows, tol.rank)
        };
        let Some(normal) = normal else { return };
        let h = Halfspace::new(normal.clone(), dot(&normal, base)).normalized();
        let sides: Vec<S> = points.iter().map(|p| dot(&h.normal, p) - h.offset.clone()).collect();
        let zero = |s: &S| s.is_negligible(tol.feasibility, scale);
        let below = sides.iter().all(|s| *s <= S::zero() || zero(s));
        let above = sides.iter().all(|s| *s >= S::zero() || zero(s));
        let h = match (below, above) {
            (true, false) => h,
            (false, true) => Halfspace::new(h.normal.into_iter().map(|a| -a).collect(), -h.offset),
            _ => return,
        };
        let tight: Vec<usize> = (0..points.len()).filter(|&j| zero(&sides[j])).collect();
        if seen.insert(tight) {
            out.push(h);
        }
    });
    out
}

fn pull_face<S: Scalar>(
    p: &Polytope<S>,
    face: &[usize],
    d: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    tol: &Tolerances,
) {
    let apex = face[0];
    if d == 0 {
        let mut cell = prefix.clone();
        cell.push(apex);
        out.push(cell);
        return;
    }
    let mut seen = BTreeSet::new();
    for facet in &p.incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|j| facet.binary_search(j).is_ok()).collect();
        if sub.len() < d || sub.len() == face.len() || sub.binary_search(&apex).is_ok() {
            continue;
        }
        if !seen.insert(sub.clone()) {
            continue;
        }
        let pts: Vec<&Vec<S>> = sub.iter().map(|&j| &p.vertices[j]).collect();
        if affine_rank(&pts, tol) + 1 != d {
            continue;
        }
        prefix.push(apex);
        pull_face(p, &sub, d - 1, prefix, out, tol);
        prefix.pop();
    }
}

/// Polar body `K°(x) = {y : y·(z - x) <= 1 for all z in K}`.
///
/// Vertices come from facet duality, halfspaces from the vertices of `K`.
pub fn polar_body<S: Scalar>(k: &Polytope<S>, x: &[S], tol: &Tolerances) -> Result<Polytope<S>> {
    k.check_interior(x, tol)?;
    let halfspaces: Vec<Halfspace<S>> = k
        .vertices
        .iter()
        .map(|v| Halfspace::new(v.iter().zip(x).map(|(a, b)| a.clone() - b.clone()).collect(), S::one()))
        .collect();
    let vertices: Vec<Vec<S>> = k
        .halfspaces
        .iter()
        .map(|h| {
            let s = h.slack(x);
            h.normal.iter().map(|a| a.clone() / s.clone()).collect()
        })
        .collect();
    // facet j of the polar is dual to vertex j of K: transpose the incidence
    let mut incidence = vec![Vec::new(); k.vertices.len()];
    for (i, verts) in k.incidence.iter().enumerate() {
        for &j in verts {
            incidence[j].push(i);
        }
    }
    Ok(Polytope { dim: k.dim, halfspaces, vertices, incidence, cells: Arc::default() })
}

/// Polar template reusable across reference points: the combinatorics and
/// boundary triangulation of `K°(x)` are fixed, only coordinates move.
#[derive(Clone, Debug)]
pub struct PolarFamily<S = f64> {
    body: Polytope<S>,
    template: Polytope<S>,
    tol: Tolerances,
}

impl<S: Scalar> PolarFamily<S> {
    pub fn new(body: Polytope<S>, tol: Tolerances) -> Result<Self> {
        let c = body.vertex_centroid();
        let template = polar_body(&body, &c, &tol)?;
        template.boundary_cells(&tol);
        Ok(Self { body, template, tol })
    }

    pub fn body(&self) -> &Polytope<S> {
        &self.body
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn polar_at(&self, x: &[S]) -> Result<Polytope<S>> {
        let fresh = polar_body(&self.body, x, &self.tol)?;
        Ok(self.template.with_coordinates(fresh.halfspaces, fresh.vertices))
    }
}

/// Cone from the vertex centroid over the boundary triangulation.
pub fn triangulate<S: Scalar>(p: &Polytope<S>, tol: &Tolerances) -> Result<Vec<Simplex<S>>> {
    check_full_dimensional(p.dim, &p.vertices, tol)?;
    let c = p.vertex_centroid();
    Ok(p
        .boundary_cells(tol)
        .iter()
        .map(|cell| {
            let mut verts = Vec::with_capacity(p.dim + 1);
            verts.push(c.clone());
            verts.extend(cell.iter().map(|&j| p.vertices[j].clone()));
            Simplex::new(verts)
        })
        .collect())
}

pub fn volume<S: Scalar>(p: &Polytope<S>, tol: &Tolerances) -> Result<S> {
    Ok(triangulate(p, tol)?.iter().fold(S::zero(), |acc, s| acc + s.volume()))
}

/// JSON form: either representation may be given; the other is derived.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HalfspaceSpec {
    pub a: Vec<f64>,
    pub b: f64,
}

impl PolytopeSpec {
    pub fn build<S: Scalar>(&self, tol: &Tolerances) -> Result<Polytope<S>> {
        match (&self.halfspaces, &self.vertices) {
            (Some(hs), _) => Polytope::from_halfspaces(
                self.dim,
                hs.iter()
                    .map(|h| Halfspace::new(h.a.iter().map(|&x| S::from_f64(x)).collect(), S::from_f64(h.b)))
                    .collect(),
                tol,
            ),
            (None, Some(vs)) => Polytope::from_vertices(
                self.dim,
                vs.iter().map(|v| v.iter().map(|&x| S::from_f64(x)).collect()).collect(),
                tol,
            ),
            (None, None) => Err(Error::InvalidInput("polytope needs halfspaces or vertices".into())),
        }
    }

    pub fn from_polytope<S: Scalar>(p: &Polytope<S>) -> Self {
        Self {
            dim: p.dim,
            halfspaces: Some(
                p.halfspaces
                    .iter()
                    .map(|h| HalfspaceSpec { a: h.normal.iter().map(Scalar::to_f64).collect(), b: h.offset.to_f64() })
                    .collect(),
            ),
            vertices: Some(p.vertices.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect()),
        }
    }
}

/// `[lo, hi]^n`.
pub fn hypercube<S: Scalar>(dim: usize, lo: f64, hi: f64) -> Polytope<S> {
    let mut hs = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        let mut e = vec![S::zero(); dim];
        e[j] = S::one();
        hs.push(Halfspace::new(e.clone(), S::from_f64(hi)));
        hs.push(Halfspace::new(e.into_iter().map(|a| -a).collect(), S::from_f64(-lo)));
    }
    Polytope::from_halfspaces(dim, hs, &Tolerances::default()).expect("box is a valid polytope")
}

/// `conv{0, e_1, ..., e_n}` scaled by `scale`.
pub fn standard_simplex<S: Scalar>(dim: usize, scale: f64) -> Polytope<S> {
    let mut hs = Vec::with_capacity(dim + 1);
    for j in 0..dim {
        let mut e = vec![S::zero(); dim];
        e[j] = -S::one();
        hs.push(Halfspace::new(e, S::zero()));
    }
    hs.push(Halfspace::new(vec![S::one(); dim], S::from_f64(scale)));
    Polytope::from_halfspaces(dim, hs, &Tolerances::default()).expect("simplex is a valid polytope")
}

/// `{y : sum |y_j| <= 1}`.
pub fn cross_polytope<S: Scalar>(dim: usize) -> Polytope<S> {
    let mut verts = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        for s in [1, -1] {
            let mut e = vec![S::zero(); dim];
            e[j] = S::from_i64(s);
            verts.push(e);
        }
    }
    Polytope::from_vertices(dim, verts, &Tolerances::default()).expect("cross-polytope is a valid polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn combinations_are_complete() {
        let mut n = 0;
        for_each_combination(6, 3, |_| n += 1);
        assert_eq!(n, 20);
        let mut all = Vec::new();
        for_each_combination(3, 3, |c| all.push(c.to_vec()));
        assert_eq!(all, vec![vec![0, 1, 2]]);
        let mut none = 0;
        for_each_combination(2, 3, |_| none += 1);
        assert_eq!(none, 0);
    }

    #[test]
    fn square_vertices() {
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        let v = sorted(sq.vertices().to_vec());
        assert_eq!(v, vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn cross_polytope_from_halfspaces() {
        let hs: Vec<Halfspace> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
            .iter()
            .map(|&(a, b)| Halfspace::new(vec![a, b], 1.0))
            .collect();
        let v = enumerate_vertices(2, &hs, &Tolerances::default()).unwrap();
        let v: Vec<Vec<f64>> = sorted(v).into_iter().map(|p| p.iter().map(|x| x + 0.0).collect()).collect();
        assert_eq!(v, vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn unbounded_and_infeasible_are_rejected() {
        let tol = Tolerances::default();
        let quadrant = vec![Halfspace::new(vec![-1.0, 0.0], 0.0), Halfspace::new(vec![0.0, -1.0], 0.0)];
        assert!(matches!(enumerate_vertices(2, &quadrant, &tol), Err(Error::Unbounded { .. })));
        let empty = vec![Halfspace::new(vec![1.0], -1.0), Halfspace::new(vec![-1.0], -1.0)];
        assert!(matches!(enumerate_vertices(1, &empty, &tol), Err(Error::Infeasible)));
    }

    #[test]
    fn flat_point_set_is_dimension_deficient() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let err = Polytope::from_vertices(2, pts, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionDeficient { rank: 1, dim: 2 }));
    }

    #[test]
    fn redundant_halfspace_dropped() {
        let mut hs: Vec<Halfspace> = hypercube::<f64>(2, 0.0, 1.0).halfspaces().to_vec();
        hs.push(Halfspace::new(vec![1.0, 1.0], 5.0));
        hs.push(Halfspace::new(vec![1.0, 1.0], 2.0)); // touches only (1,1)
        let p = Polytope::from_halfspaces(2, hs, &Tolerances::default()).unwrap();
        assert_eq!(p.halfspaces().len(), 4);
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let tol = Tolerances::default();
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        let polar = polar_body(&sq, &[0.0, 0.0], &tol).unwrap();
        let v: Vec<Vec<f64>> = sorted(polar.vertices().to_vec())
            .into_iter()
            .map(|p| p.iter().map(|x| x + 0.0).collect())
            .collect();
        assert_eq!(v, vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(polar.halfspaces().len(), 4);
        for h in polar.halfspaces() {
            assert!((h.normal[0].abs() - 1.0).abs() < 1e-15 && (h.normal[1].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn polar_of_segment() {
        let seg = hypercube::<f64>(1, -1.0, 1.0);
        let polar = polar_body(&seg, &[0.0], &Tolerances::default()).unwrap();
        let v = sorted(polar.vertices().to_vec());
        assert_eq!(v, vec![vec![-1.0], vec![1.0]]);
    }

    #[test]
    fn boundary_point_is_not_interior() {
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        let err = polar_body(&sq, &[1.0, 0.0], &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NotInterior { .. }));
        assert!(polar_body(&sq, &[1.0 - 1e-12, 0.0], &Tolerances::default()).is_err());
    }

    #[test]
    fn triangulations_of_small_bodies() {
        let tol = Tolerances::default();
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        let s = triangulate(&sq, &tol).unwrap();
        let area: f64 = s.iter().map(Simplex::volume).sum();
        assert!((area - 4.0).abs() < 1e-14);
        let cp = cross_polytope::<f64>(2);
        let s = triangulate(&cp, &tol).unwrap();
        assert_eq!(s.len(), 4);
        for simplex in &s {
            assert!((simplex.volume() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_cube_volume() {
        let tol = Tolerances::default();
        let cube = hypercube::<BigRational>(4, -1.0, 2.0);
        assert_eq!(volume(&cube, &tol).unwrap(), BigRational::from_integer(81.into()));
        let simplex = standard_simplex::<BigRational>(3, 1.0);
        assert_eq!(volume(&simplex, &tol).unwrap(), BigRational::new(1.into(), 6.into()));
    }

    #[test]
    fn degenerate_simplex_has_zero_measure() {
        let s = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0 + 1e-17]]);
        assert!(s.is_degenerate());
        assert_eq!(s.volume(), 0.0);
    }

    #[test]
    fn polytope_spec_round_trip() {
        let spec: PolytopeSpec = serde_json::from_str(r#"{"dim":2,"vertices":[[0,0],[2,0],[0,2],[0.5,0.5]]}"#).unwrap();
        let p: Polytope = spec.build(&Tolerances::default()).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.halfspaces().len(), 3);
        let again: Polytope = PolytopeSpec::from_polytope(&p).build(&Tolerances::default()).unwrap();
        assert_eq!(again.vertices().len(), 3);
    }
}
