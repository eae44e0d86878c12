//! Exact integration of polynomials over bounded rational polytopes.
//!
//! The pipeline is: normalize and merge constraints, check boundedness,
//! enumerate vertices by solving every basis of constraint hyperplanes,
//! triangulate by pulling from the lowest-indexed vertex of each face, and
//! integrate each simplex in barycentric coordinates with the Dirichlet
//! moment formula `∫_Δ λ^α = |det| · α! / (d + |α|)!`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::Poly;
use crate::linalg::{self, Matrix};
use crate::rational::{factorial, Rational};

/// Default ceiling on the ambient dimension.
pub const DEFAULT_DIM_GUARD: usize = 9;

/// `lower < normal·x <= upper`; a missing lower bound means `-∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Rational>,
    pub lower: Option<Rational>,
    pub upper: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl RationalPolytope {
    pub fn new(dim: usize) -> Self {
        RationalPolytope {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn with(mut self, normal: Vec<Rational>, lower: Option<Rational>, upper: Rational) -> Self {
        self.push(normal, lower, upper);
        self
    }

    pub fn push(&mut self, normal: Vec<Rational>, lower: Option<Rational>, upper: Rational) {
        assert_eq!(normal.len(), self.dim, "constraint normal has wrong length");
        self.constraints.push(Constraint { normal, lower, upper });
    }

    /// `[0,1]^dim`.
    pub fn unit_box(dim: usize) -> Self {
        let mut p = RationalPolytope::new(dim);
        for i in 0..dim {
            p.push(unit(dim, i), Some(Rational::zero()), Rational::one());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Membership in the closure.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| {
            let v = linalg::dot(&c.normal, x);
            v <= c.upper && c.lower.as_ref().is_none_or(|l| *l <= v)
        })
    }
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

/// Two-sided slab `lo <= a·x <= hi` with `a` scaled so its first nonzero
/// entry is `1`.
#[derive(Clone, Debug)]
struct Slab {
    a: Vec<Rational>,
    lo: Option<Rational>,
    hi: Option<Rational>,
}

/// Merged slabs, or `None` when the system is trivially infeasible.
fn normalize(p: &RationalPolytope) -> Option<Vec<Slab>> {
    let mut slabs: Vec<Slab> = Vec::new();
    for c in &p.constraints {
        let Some(k) = c.normal.iter().position(|x| !x.is_zero()) else {
            let zero = Rational::zero();
            if c.upper < zero || c.lower.as_ref().is_some_and(|l| *l > zero) {
                return None;
            }
            continue;
        };
        let s = c.normal[k].clone();
        let a: Vec<Rational> = c.normal.iter().map(|x| x / &s).collect();
        let hi = Some(&c.upper / &s);
        let lo = c.lower.as_ref().map(|l| l / &s);
        let (lo, hi) = if s.is_negative() { (hi, lo) } else { (lo, hi) };
        match slabs.iter_mut().find(|x| x.a == a) {
            Some(x) => {
                x.lo = max_opt(x.lo.take(), lo);
                x.hi = min_opt(x.hi.take(), hi);
            }
            None => slabs.push(Slab { a, lo, hi }),
        }
    }
    for s in &slabs {
        if let (Some(l), Some(h)) = (&s.lo, &s.hi) {
            if l > h {
                return None;
            }
        }
    }
    Some(slabs)
}

fn max_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn k_subsets(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_bounded(dim: usize, slabs: &[Slab]) -> Result<()> {
    let normals: Matrix = slabs.iter().map(|s| s.a.clone()).collect();
    if linalg::rank(&normals) < dim {
        return Err(Error::Unbounded);
    }
    // a pointed recession cone is trivial iff it has no extreme ray
    let recedes = |y: &[Rational]| {
        slabs.iter().all(|s| {
            let v = linalg::dot(&s.a, y);
            (s.hi.is_none() || !v.is_positive()) && (s.lo.is_none() || !v.is_negative())
        })
    };
    let mut unbounded = false;
    k_subsets(slabs.len(), dim - 1, |idx| {
        if unbounded {
            return;
        }
        let rows: Matrix = idx.iter().map(|&i| slabs[i].a.clone()).collect();
        if let Some(y) = linalg::null_vector(&rows, dim) {
            let neg: Vec<Rational> = y.iter().map(|x| -x).collect();
            if recedes(&y) || recedes(&neg) {
                unbounded = true;
            }
        }
    });
    if unbounded {
        Err(Error::Unbounded)
    } else {
        Ok(())
    }
}

/// Vertices of a bounded polytope together with, for every halfspace,
/// the set of vertices on its boundary hyperplane.
#[derive(Clone, Debug)]
pub struct VertexSet {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    tight: Vec<FixedBitSet>,
}

fn guard(dim: usize) -> Result<()> {
    if dim > DEFAULT_DIM_GUARD {
        return Err(Error::ResourceLimit(format!(
            "polytope dimension {dim} exceeds the guard {DEFAULT_DIM_GUARD}"
        )));
    }
    Ok(())
}

/// Exact vertex set of the closure in lexicographic order; empty iff the
/// closure is empty.
pub fn vertex_enumeration(p: &RationalPolytope) -> Result<Vec<Vec<Rational>>> {
    Ok(vertex_set(p)?.points)
}

pub fn vertex_set(p: &RationalPolytope) -> Result<VertexSet> {
    guard(p.dim)?;
    let d = p.dim;
    let empty = |d| VertexSet {
        dim: d,
        points: Vec::new(),
        tight: Vec::new(),
    };
    let Some(slabs) = normalize(p) else {
        if d > 0 {
            check_bounded_raw(p)?;
        }
        return Ok(empty(d));
    };
    if d == 0 {
        return Ok(VertexSet {
            dim: 0,
            points: vec![Vec::new()],
            tight: vec![],
        });
    }
    check_bounded(d, &slabs)?;

    let feasible = |x: &[Rational]| {
        slabs.iter().all(|s| {
            let v = linalg::dot(&s.a, x);
            s.hi.as_ref().is_none_or(|h| v <= *h) && s.lo.as_ref().is_none_or(|l| *l <= v)
        })
    };
    let mut points: Vec<Vec<Rational>> = Vec::new();
    k_subsets(slabs.len(), d, |idx| {
        let rows: Matrix = idx.iter().map(|&i| slabs[i].a.clone()).collect();
        let Some(inv) = linalg::inverse(&rows) else {
            return;
        };
        let sides: Vec<Vec<&Rational>> = idx
            .iter()
            .map(|&i| slabs[i].lo.iter().chain(slabs[i].hi.iter()).collect())
            .collect();
        let mut choice = vec![0usize; d];
        'next: loop {
            let rhs: Vec<Rational> = (0..d).map(|k| sides[k][choice[k]].clone()).collect();
            let x = linalg::mat_vec(&inv, &rhs);
            if feasible(&x) {
                points.push(x);
            }
            for k in 0..d {
                choice[k] += 1;
                if choice[k] < sides[k].len() {
                    continue 'next;
                }
                choice[k] = 0;
            }
            break;
        }
    });
    points.sort();
    points.dedup();

    let mut tight = Vec::with_capacity(2 * slabs.len());
    for s in &slabs {
        for bound in [&s.hi, &s.lo] {
            let mut set = FixedBitSet::with_capacity(points.len());
            if let Some(b) = bound {
                for (i, x) in points.iter().enumerate() {
                    if linalg::dot(&s.a, x) == *b {
                        set.insert(i);
                    }
                }
            }
            tight.push(set);
        }
    }
    Ok(VertexSet { dim: d, points, tight })
}

// Boundedness of a system already known to be empty after merging; only
// the normals matter.
fn check_bounded_raw(p: &RationalPolytope) -> Result<()> {
    let slabs: Vec<Slab> = p
        .constraints
        .iter()
        .filter(|c| c.normal.iter().any(|x| !x.is_zero()))
        .map(|c| Slab {
            a: c.normal.clone(),
            lo: c.lower.clone(),
            hi: Some(c.upper.clone()),
        })
        .collect();
    check_bounded(p.dim, &slabs)
}

/// A full-dimensional simplex; degenerate vertex sets are rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Vec<Rational>>,
    abs_det: Rational,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<Rational>>) -> Option<Self> {
        let d = vertices.first()?.len();
        if vertices.len() != d + 1 {
            return None;
        }
        let abs_det = linalg::abs_det(&edge_matrix(&vertices));
        if abs_det.is_zero() {
            return None;
        }
        Some(Simplex { vertices, abs_det })
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn volume(&self) -> Rational {
        &self.abs_det / Rational::from_integer(factorial(self.dim() as u32))
    }

    /// `∫_S f`, with `f` a product of univariate polynomials of affine
    /// forms.
    pub fn integrate(&self, f: &AffineProduct) -> Rational {
        if f.scalar.is_zero() {
            return Rational::zero();
        }
        if f.factors.iter().all(|(p, _)| p.degree() == 0) {
            let c = f.factors.iter().fold(f.scalar.clone(), |acc, (p, _)| acc * p.eval(&Rational::zero()));
            return c * self.volume();
        }
        let mut acc = BaryPoly::constant(self.vertices.len(), f.scalar.clone());
        for (p, form) in &f.factors {
            let vals: Vec<Rational> = self.vertices.iter().map(|v| form.eval(v)).collect();
            let lin = BaryPoly::linear(&vals);
            acc = acc.mul(&lin.compose(p));
        }
        acc.integrate_standard() * &self.abs_det
    }
}

fn edge_matrix(vertices: &[Vec<Rational>]) -> Matrix {
    let v0 = &vertices[0];
    vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect()
}

/// Triangulates a full-dimensional vertex set by pulling. Returns vertex
/// index lists, or nothing if the set is not full-dimensional.
pub fn triangulate_indices(vs: &VertexSet) -> Vec<Vec<usize>> {
    let d = vs.dim;
    let n = vs.points.len();
    if n < d + 1 || linalg::affine_rank(&vs.points) != Some(d) {
        return Vec::new();
    }
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    let mut memo: HashMap<FixedBitSet, Vec<Vec<usize>>> = HashMap::new();
    pull(&all, d, &vs.tight, &mut memo)
}

fn pull(
    face: &FixedBitSet,
    dim: usize,
    tight: &[FixedBitSet],
    memo: &mut HashMap<FixedBitSet, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if face.count_ones(..) == dim + 1 {
        return vec![face.ones().collect()];
    }
    if let Some(hit) = memo.get(face) {
        return hit.clone();
    }
    let apex = face.ones().next().expect("nonempty face");
    // facets of the face are the maximal proper sets face ∩ tight[h]
    let mut cands: Vec<FixedBitSet> = Vec::new();
    for t in tight {
        let mut c = face.clone();
        c.intersect_with(t);
        if c.is_clear() || c == *face || cands.contains(&c) {
            continue;
        }
        cands.push(c);
    }
    let facets: Vec<&FixedBitSet> = cands
        .iter()
        .filter(|c| !cands.iter().any(|o| o != *c && c.is_subset(o)))
        .collect();
    let mut out = Vec::new();
    for f in facets {
        if f.contains(apex) {
            continue;
        }
        for mut s in pull(f, dim - 1, tight, memo) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    memo.insert(face.clone(), out.clone());
    out
}

/// Triangulation of the convex hull of `points` (expected to be its
/// vertices). Facets are found by brute force, so this is meant for small
/// inputs; polytopes given by constraints go through [`vertex_set`].
pub fn triangulate(points: &[Vec<Rational>]) -> Vec<Simplex> {
    let Some(d) = points.first().map(Vec::len) else {
        return Vec::new();
    };
    if linalg::affine_rank(points) != Some(d) {
        return Vec::new();
    }
    if d == 0 {
        return Simplex::new(points[..1].to_vec()).into_iter().collect();
    }
    let mut tight: Vec<FixedBitSet> = Vec::new();
    k_subsets(points.len(), d, |idx| {
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| points[i].clone()).collect();
        let Some(normal) = linalg::null_vector(&edge_matrix(&sub), d) else {
            return;
        };
        let level = linalg::dot(&normal, &sub[0]);
        let side: Vec<Rational> = points.iter().map(|p| linalg::dot(&normal, p) - &level).collect();
        if side.iter().all(|s| !s.is_positive()) || side.iter().all(|s| !s.is_negative()) {
            let mut set = FixedBitSet::with_capacity(points.len());
            set.extend(side.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i));
            if !tight.contains(&set) {
                tight.push(set);
            }
        }
    });
    let vs = VertexSet {
        dim: d,
        points: points.to_vec(),
        tight,
    };
    triangulate_indices(&vs)
        .into_iter()
        .filter_map(|s| Simplex::new(s.into_iter().map(|i| points[i].clone()).collect()))
        .collect()
}

/// `constant + coeffs·x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl AffineForm {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.constant + linalg::dot(&self.coeffs, x)
    }

    pub fn coordinate(dim: usize, i: usize) -> Self {
        AffineForm {
            constant: Rational::zero(),
            coeffs: unit(dim, i),
        }
    }
}

/// `scalar · ∏ p_k(ℓ_k(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineProduct {
    pub scalar: Rational,
    pub factors: Vec<(Poly, AffineForm)>,
}

impl AffineProduct {
    pub fn constant(c: Rational) -> Self {
        AffineProduct {
            scalar: c,
            factors: Vec::new(),
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.factors
            .iter()
            .fold(self.scalar.clone(), |acc, (p, f)| acc * p.eval(&f.eval(x)))
    }

    pub fn is_constant(&self) -> bool {
        self.factors.iter().all(|(p, _)| p.degree() == 0)
    }
}

/// Sparse multivariate polynomial; exponent vectors map to nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    nvars: usize,
    terms: HashMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: HashMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        if !c.is_zero() {
            for (e, x) in &self.terms {
                out.terms.insert(e.clone(), x * c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    fn integrate_simplex(&self, s: &Simplex) -> Rational {
        let d = self.nvars;
        let m = s.vertices.len();
        let coords: Vec<BaryPoly> = (0..d)
            .map(|j| BaryPoly::linear(&s.vertices.iter().map(|v| v[j].clone()).collect::<Vec<_>>()))
            .collect();
        let mut acc = BaryPoly::constant(m, Rational::zero());
        for (e, c) in &self.terms {
            let mut term = BaryPoly::constant(m, c.clone());
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&coords[j]);
                }
            }
            acc = acc.add(&term);
        }
        acc.integrate_standard() * &s.abs_det
    }
}

/// Polynomial in barycentric coordinates, exponents packed 6 bits each.
#[derive(Clone, Debug)]
struct BaryPoly {
    nvars: usize,
    terms: HashMap<u64, Rational>,
}

const BITS: u32 = 6;

impl BaryPoly {
    fn constant(nvars: usize, c: Rational) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        BaryPoly { nvars, terms }
    }

    fn linear(vals: &[Rational]) -> Self {
        let terms = vals
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (1u64 << (BITS * i as u32), v.clone()))
            .collect();
        BaryPoly {
            nvars: vals.len(),
            terms,
        }
    }

    fn add(&self, o: &BaryPoly) -> BaryPoly {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            *terms.entry(*k).or_insert_with(Rational::zero) += v;
        }
        terms.retain(|_, v| !v.is_zero());
        BaryPoly {
            nvars: self.nvars,
            terms,
        }
    }

    fn mul(&self, o: &BaryPoly) -> BaryPoly {
        let mut terms: HashMap<u64, Rational> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                *terms.entry(ka + kb).or_insert_with(Rational::zero) += va * vb;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        BaryPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// `p(self)` by Horner.
    fn compose(&self, p: &Poly) -> BaryPoly {
        let mut acc = BaryPoly::constant(self.nvars, Rational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&BaryPoly::constant(self.nvars, c.clone()));
        }
        acc
    }

    /// Integral over the standard simplex in `nvars − 1` dimensions,
    /// normalized so that `∫ 1 = 1/(nvars−1)!`.
    fn integrate_standard(&self) -> Rational {
        let d = self.nvars - 1;
        let mask = (1u64 << BITS) - 1;
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let mut num = BigInt::one();
            let mut total = 0u32;
            for i in 0..self.nvars {
                let e = ((k >> (BITS * i as u32)) & mask) as u32;
                num *= factorial(e);
                total += e;
            }
            acc += c * Rational::new(num, factorial(d as u32 + total));
        }
        acc
    }
}

/// Simplices of a polytope given by constraints.
pub fn triangulate_polytope(p: &RationalPolytope) -> Result<Vec<Simplex>> {
    let vs = vertex_set(p)?;
    Ok(triangulate_indices(&vs)
        .into_iter()
        .filter_map(|s| Simplex::new(s.into_iter().map(|i| vs.points[i].clone()).collect()))
        .collect())
}

const PAR_THRESHOLD: usize = 64;

fn sum_over<F>(simplices: &[Simplex], f: F) -> Rational
where
    F: Fn(&Simplex) -> Rational + Sync + Send,
{
    if simplices.len() >= PAR_THRESHOLD {
        simplices
            .par_iter()
            .map(&f)
            .reduce(Rational::zero, |a, b| a + b)
    } else {
        simplices.iter().map(f).fold(Rational::zero(), |a, b| a + b)
    }
}

pub fn volume(p: &RationalPolytope) -> Result<Rational> {
    integrate_product(p, &AffineProduct::constant(Rational::one()))
}

/// `∫_P f` for a [`MultiPoly`] over the polytope's coordinates.
pub fn integrate(p: &RationalPolytope, f: &MultiPoly) -> Result<Rational> {
    if f.nvars != p.dim {
        return Err(Error::Argument(format!(
            "integrand has {} variables, polytope dimension {}",
            f.nvars, p.dim
        )));
    }
    if p.dim == 0 {
        return Ok(if vertex_set(p)?.points.is_empty() {
            Rational::zero()
        } else {
            f.eval(&[])
        });
    }
    let simplices = triangulate_polytope(p)?;
    Ok(sum_over(&simplices, |s| f.integrate_simplex(s)))
}

/// `∫_P f` for an [`AffineProduct`].
pub fn integrate_product(p: &RationalPolytope, f: &AffineProduct) -> Result<Rational> {
    if p.dim == 0 {
        return Ok(if vertex_set(p)?.points.is_empty() {
            Rational::zero()
        } else {
            f.eval(&[])
        });
    }
    let simplices = triangulate_polytope(p)?;
    Ok(sum_over(&simplices, |s| s.integrate(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn ind(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    /// E(π₄, t): t₁, t₁+t₂, t₂ each in (−t, 1−t].
    fn hexagon(t: Rational) -> RationalPolytope {
        let lo = Some(-t.clone());
        let hi = int(1) - t;
        RationalPolytope::new(2)
            .with(ind(&[1, 0]), lo.clone(), hi.clone())
            .with(ind(&[1, 1]), lo.clone(), hi.clone())
            .with(ind(&[0, 1]), lo, hi)
    }

    #[test]
    fn hexagon_vertices() {
        let got = vertex_enumeration(&hexagon(q(1, 2))).unwrap();
        let h = q(1, 2);
        let mut want = vec![
            vec![h.clone(), int(0)],
            vec![-h.clone(), int(0)],
            vec![int(0), h.clone()],
            vec![int(0), -h.clone()],
            vec![h.clone(), -h.clone()],
            vec![-h.clone(), h.clone()],
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn hexagon_oracle_by_hand() {
        // independent oracle: all 2-subsets of the six lines, kept if feasible
        let t = q(1, 3);
        let lines: Vec<(i64, i64, Rational)> = [(1, 0), (1, 1), (0, 1)]
            .iter()
            .flat_map(|&(a, b)| [(a, b, -t.clone()), (a, b, int(1) - &t)])
            .collect();
        let mut pts = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = &lines[i];
                let (a2, b2, c2) = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let x = (c1 * int(*b2) - c2 * int(*b1)) / int(det);
                let y = (c2 * int(*a1) - c1 * int(*a2)) / int(det);
                let ok = [&x, &(&x + &y), &y].iter().all(|v| **v >= -t.clone() && **v <= int(1) - &t);
                if ok {
                    pts.push(vec![x, y]);
                }
            }
        }
        pts.sort();
        pts.dedup();
        assert_eq!(vertex_enumeration(&hexagon(t)).unwrap(), pts);
    }

    #[test]
    fn box_and_infeasible() {
        assert_eq!(vertex_enumeration(&RationalPolytope::unit_box(2)).unwrap().len(), 4);
        let p = RationalPolytope::new(1)
            .with(ind(&[1]), None, int(0))
            .with(ind(&[-1]), None, int(-1));
        assert!(vertex_enumeration(&p).unwrap().is_empty());
        assert_eq!(volume(&p).unwrap(), int(0));
    }

    #[test]
    fn unbounded_is_error() {
        let p = RationalPolytope::new(2).with(ind(&[1, 0]), Some(int(0)), int(1));
        assert!(matches!(vertex_enumeration(&p), Err(Error::Unbounded)));
        let wedge = RationalPolytope::new(2)
            .with(ind(&[1, 0]), None, int(1))
            .with(ind(&[0, 1]), None, int(1));
        assert!(matches!(volume(&wedge), Err(Error::Unbounded)));
    }

    #[test]
    fn dimension_guard() {
        let p = RationalPolytope::unit_box(10);
        assert!(matches!(vertex_enumeration(&p), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn triangulations() {
        let sq = vec![ind(&[0, 0]), ind(&[1, 0]), ind(&[0, 1]), ind(&[1, 1])];
        let tri = triangulate(&sq);
        assert_eq!(tri.len(), 2);
        assert_eq!(tri.iter().map(Simplex::volume).fold(int(0), |a, b| a + b), int(1));
        let simplex = vec![ind(&[0, 0, 0]), ind(&[2, 0, 0]), ind(&[0, 1, 0]), ind(&[0, 0, 3])];
        let tri = triangulate(&simplex);
        assert_eq!(tri.len(), 1);
        assert_eq!(tri[0].volume(), int(1));
        let hex = vertex_enumeration(&hexagon(q(1, 2))).unwrap();
        let area = triangulate(&hex).iter().map(Simplex::volume).fold(int(0), |a, b| a + b);
        assert_eq!(area, q(3, 4));
        assert!(triangulate(&[ind(&[0, 0]), ind(&[1, 1]), ind(&[2, 2])]).is_empty());
    }

    #[test]
    fn hexagon_integrals() {
        assert_eq!(volume(&hexagon(q(1, 2))).unwrap(), q(3, 4));
        assert_eq!(volume(&hexagon(q(1, 3))).unwrap(), q(13, 18));
        let t1 = MultiPoly::var(2, 0);
        assert_eq!(integrate(&hexagon(q(1, 2)), &t1).unwrap(), int(0));
    }

    #[test]
    fn monomials_on_unit_square() {
        // ∫∫ x²y over [0,1]² = 1/6 and ∫∫ (x+y)³ = 3/2
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let f = x.mul(&x).mul(&y);
        assert_eq!(integrate(&RationalPolytope::unit_box(2), &f).unwrap(), q(1, 6));
        let s = x.add(&y);
        let cube = s.mul(&s).mul(&s);
        assert_eq!(integrate(&RationalPolytope::unit_box(2), &cube).unwrap(), q(3, 2));
        let prod = AffineProduct {
            scalar: int(1),
            factors: vec![(Poly::new(vec![int(0), int(0), int(0), int(1)]), AffineForm {
                constant: int(0),
                coeffs: ind(&[1, 1]),
            })],
        };
        assert_eq!(integrate_product(&RationalPolytope::unit_box(2), &prod).unwrap(), q(3, 2));
    }

    #[test]
    fn zero_dimensional() {
        let p = RationalPolytope::new(0);
        assert_eq!(integrate(&p, &MultiPoly::constant(0, q(5, 7))).unwrap(), q(5, 7));
    }

    #[test]
    fn cube_volume_by_two_orders() {
        // a skewed 3-polytope triangulated from two vertex orderings
        let p = RationalPolytope::new(3)
            .with(ind(&[1, 0, 0]), Some(int(0)), int(2))
            .with(ind(&[0, 1, 0]), Some(int(0)), int(1))
            .with(ind(&[0, 0, 1]), Some(int(0)), int(1))
            .with(ind(&[1, 1, 1]), None, q(5, 2));
        let v = volume(&p).unwrap();
        let mut pts = vertex_enumeration(&p).unwrap();
        let a: Rational = triangulate(&pts).iter().map(Simplex::volume).fold(int(0), |x, y| x + y);
        pts.reverse();
        let b: Rational = triangulate(&pts).iter().map(Simplex::volume).fold(int(0), |x, y| x + y);
        assert_eq!(a, v);
        assert_eq!(b, v);
        // inclusion-exclusion: (1/6)·Σ_S (−1)^|S| (5/2 − Σ_S a_i)₊³ with a = (2,1,1)
        assert_eq!(v, q(71, 48));
    }
}
