//! The maps `Γ_π` and `Λ_π`.
//!
//! `Λ_π` has two engines. The polytope engine integrates over `E(π,t)` at
//! a fixed rational `t`. The rewrite engine applies the reduction rules
//! (gluing neighbours, the `1 ~ n` block, adjacent and internal interval
//! splits, and the `0_n`/`1_n` closed forms) until either a closed form is
//! reached or a purely crossing core is left. [`LambdaEngine`] combines
//! them: cores are reconstructed as functions of `t` by interpolating the
//! polytope engine between the candidate breakpoints, and `τ(Λ_π(..)g)` of
//! a core is a single integral over the lifted polytope in `(x, t)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cache::{cache_key, CacheRecord, KeyPoint, LambdaCache, CACHE_VERSION};
use crate::error::{arg, Error, Result};
use crate::funcspace::{interpolate, PiecewisePoly, PiecewiseJson, Poly};
use crate::partitions::SetPartition;
use crate::polytope::{self, AffineForm, AffineProduct, RationalPolytope};
use crate::rational::{fmt_rational, parse_rational, Rational};

/// `Γ_π(g₁..g_n)`: the product over the block of `1`, times `τ` of the
/// block products over every other block.
pub fn gamma(p: &SetPartition, gs: &[PiecewisePoly]) -> Result<PiecewisePoly> {
    if gs.len() != p.n() {
        return arg(format!("Γ of a partition of {} needs {} functions, got {}", p.n(), p.n(), gs.len()));
    }
    let mut scalar = Rational::one();
    let mut head = PiecewisePoly::one();
    for (i, block) in p.blocks().iter().enumerate() {
        let prod = PiecewisePoly::product(block.iter().map(|&j| &gs[j - 1]));
        if i == 0 {
            head = prod;
        } else {
            scalar *= prod.tau();
            if scalar.is_zero() {
                return Ok(PiecewisePoly::zero());
            }
        }
    }
    Ok(head.scale(&scalar))
}

fn check_arity(p: &SetPartition, gs: usize) -> Result<()> {
    if gs + 1 != p.n() {
        return arg(format!(
            "Λ of a partition of {} needs {} functions, got {gs}",
            p.n(),
            p.n() - 1
        ));
    }
    Ok(())
}

fn check_t(t: &Rational) -> Result<()> {
    if *t < Rational::zero() || *t > Rational::one() {
        return arg(format!("t = {} lies outside [0,1]", fmt_rational(t)));
    }
    Ok(())
}

/// Integration data for `E(π,t)`: variables are `J_π` in ascending order,
/// and `forms[p-1]` lists the variable indices of `I_π(p)`.
struct Layout {
    dim: usize,
    forms: Vec<Vec<usize>>,
}

impl Layout {
    fn new(p: &SetPartition) -> Self {
        let g = p.geometry();
        let col: HashMap<usize, usize> = g.j_set.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let forms = g.i_sets.iter().map(|s| s.iter().map(|j| col[j]).collect()).collect();
        Layout {
            dim: g.j_set.len(),
            forms,
        }
    }

    /// Cells of `E(π,t)` (fixed `t`) or of the lifted region in `(x,t)`,
    /// each paired with its polynomial integrand. `gs` has one function
    /// per `p` that should appear in the product (`n−1` or `n`).
    fn cells(&self, gs: &[&PiecewisePoly], t: Option<&Rational>) -> Vec<(RationalPolytope, AffineProduct)> {
        let lifted = t.is_none();
        let dim = self.dim + usize::from(lifted);
        let zero = Rational::zero();
        let one = Rational::one();
        let form = |p: usize| -> AffineForm {
            let mut coeffs = vec![Rational::zero(); dim];
            for &j in &self.forms[p] {
                coeffs[j] = Rational::one();
            }
            match t {
                Some(t) => AffineForm {
                    constant: t.clone(),
                    coeffs,
                },
                None => {
                    coeffs[dim - 1] = Rational::one();
                    AffineForm {
                        constant: Rational::zero(),
                        coeffs,
                    }
                }
            }
        };
        let mut base = RationalPolytope::new(dim);
        if lifted {
            let mut e = vec![Rational::zero(); dim];
            e[dim - 1] = Rational::one();
            base.push(e, Some(zero.clone()), one.clone());
        }
        let mut scalar = Rational::one();
        // (p, form) for factors that vary over the region
        let mut varying: Vec<(usize, AffineForm)> = Vec::new();
        for (p, g) in gs.iter().enumerate() {
            if self.forms[p].is_empty() {
                if let Some(t) = t {
                    scalar *= g.eval_at(t).expect("t checked");
                    continue;
                }
            } else {
                let f = form(p);
                base.push(f.coeffs.clone(), Some(-f.constant.clone()), &one - &f.constant);
            }
            varying.push((p, form(p)));
        }
        if scalar.is_zero() {
            return Vec::new();
        }
        let mut cells = vec![(base, AffineProduct::constant(scalar))];
        for (p, f) in varying {
            let g = gs[p];
            let mut next = Vec::with_capacity(cells.len() * g.pieces().len());
            for (poly, prod) in &cells {
                for (a, b, piece) in g.intervals() {
                    if piece.is_zero() {
                        continue;
                    }
                    let mut q = poly.clone();
                    if !g.is_single_piece() {
                        q.push(f.coeffs.clone(), Some(a - &f.constant), b - &f.constant);
                    }
                    let mut pr = prod.clone();
                    if piece.degree() == 0 {
                        pr.scalar *= piece.eval(&zero);
                    } else {
                        pr.factors.push((piece.clone(), f.clone()));
                    }
                    next.push((q, pr));
                }
            }
            cells = next;
        }
        cells
    }
}

/// `Λ_π(g₁..g_{n−1})(t)` by direct integration over `E(π,t)`.
pub fn lambda_eval_at(p: &SetPartition, gs: &[PiecewisePoly], t: &Rational) -> Result<Rational> {
    check_arity(p, gs.len())?;
    check_t(t)?;
    let refs: Vec<&PiecewisePoly> = gs.iter().collect();
    eval_refs(p, &refs, t)
}

fn eval_refs(p: &SetPartition, gs: &[&PiecewisePoly], t: &Rational) -> Result<Rational> {
    let layout = Layout::new(p);
    let mut acc = Rational::zero();
    for (poly, f) in layout.cells(gs, Some(t)) {
        acc += polytope::integrate_product(&poly, &f)?;
    }
    Ok(acc)
}

/// `τ(Λ_π(g₁..g_{n−1})·g_n)` as one integral over the lifted region
/// `{(x,t) : t ∈ [0,1], x ∈ E(π,t)}`.
pub fn tau_lambda_lifted(p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Rational> {
    check_arity(p, gs.len())?;
    let mut refs: Vec<&PiecewisePoly> = gs.iter().collect();
    refs.push(gn);
    lifted_refs(p, &refs)
}

fn lifted_refs(p: &SetPartition, gs: &[&PiecewisePoly]) -> Result<Rational> {
    let layout = Layout::new(p);
    let mut acc = Rational::zero();
    for (poly, f) in layout.cells(gs, None) {
        acc += polytope::integrate_product(&poly, &f)?;
    }
    Ok(acc)
}

/// Values of `t` where the piecewise structure of `Λ_π(gs)` can change:
/// the `t`-coordinates of every vertex of every lifted cell, plus `0, 1`.
fn breakpoint_candidates(p: &SetPartition, gs: &[&PiecewisePoly]) -> Result<Vec<Rational>> {
    let layout = Layout::new(p);
    let mut out = vec![Rational::zero(), Rational::one()];
    for g in gs {
        out.extend(g.breakpoints().iter().cloned());
    }
    for (poly, _) in layout.cells(gs, None) {
        for v in polytope::vertex_enumeration(&poly)? {
            out.push(v.last().expect("lifted dimension ≥ 1").clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn default_degree(p: &SetPartition, gs: &[&PiecewisePoly]) -> usize {
    let j = p.n() - p.num_blocks();
    j + gs.iter().map(|g| g.degree()).sum::<usize>()
}

/// Reconstructs `Λ_π(gs)` on `[a,b]` as a single polynomial: samples at
/// `degree_bound + 1` interior points, interpolates, and checks two more
/// interior points. A mismatch means a breakpoint lies inside `(a,b)`.
pub fn lambda_interpolate(
    p: &SetPartition,
    gs: &[PiecewisePoly],
    a: &Rational,
    b: &Rational,
    degree_bound: usize,
) -> Result<Poly> {
    check_arity(p, gs.len())?;
    check_t(a)?;
    check_t(b)?;
    if a >= b {
        return arg("interpolation interval must have a < b");
    }
    let refs: Vec<&PiecewisePoly> = gs.iter().collect();
    interpolate_refs(a, b, degree_bound, &|t| eval_refs(p, &refs, t))
}

/// [`lambda_interpolate`] with the default degree bound
/// `|J_π| + Σ deg g_p`.
pub fn lambda_interpolate_default(p: &SetPartition, gs: &[PiecewisePoly], a: &Rational, b: &Rational) -> Result<Poly> {
    let refs: Vec<&PiecewisePoly> = gs.iter().collect();
    lambda_interpolate(p, gs, a, b, default_degree(p, &refs))
}

fn interpolate_refs(
    a: &Rational,
    b: &Rational,
    degree_bound: usize,
    eval: &(dyn Fn(&Rational) -> Result<Rational> + Sync),
) -> Result<Poly> {
    let m = Rational::from_integer((degree_bound as i64 + 2).into());
    let width = b - a;
    let at = |num: Rational| a + &width * num / &m;
    let mut ts: Vec<Rational> = (1..=degree_bound as i64 + 1).map(|k| at(Rational::from_integer(k.into()))).collect();
    let half = Rational::new(1.into(), 2.into());
    ts.push(at(half.clone()));
    ts.push(at(Rational::from_integer((degree_bound as i64 + 1).into()) + half));
    let vals: Vec<Rational> = ts.par_iter().map(eval).collect::<Result<_>>()?;
    let k = degree_bound + 1;
    let pts: Vec<(Rational, Rational)> = ts[..k].iter().cloned().zip(vals[..k].iter().cloned()).collect();
    let poly = interpolate(&pts)?;
    for (t, v) in ts[k..].iter().zip(&vals[k..]) {
        if poly.eval(t) != *v {
            return Err(Error::BreakpointInside {
                a: fmt_rational(a),
                b: fmt_rational(b),
            });
        }
    }
    Ok(poly)
}

/// Which rewrite applies first to `π`, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `k ~ k+1`.
    Glue(usize),
    /// `1 ~ n`.
    WrapAround,
    /// `{1..x}` is a union of blocks.
    Split(usize),
    /// `{x+1..x+y}` is a union of blocks, with `x ≥ 1`, `x+y ≤ n−1`.
    Internal(usize, usize),
    One,
    Zero,
    /// Purely crossing: nothing applies.
    Core,
}

pub fn applicable_rule(p: &SetPartition) -> Rule {
    let n = p.n();
    if n <= 1 {
        return Rule::Zero;
    }
    if let Some(k) = p.adjacent_pair() {
        return Rule::Glue(k);
    }
    if p.same_block(1, n) {
        return Rule::WrapAround;
    }
    if let Some(x) = (1..n).find(|&x| p.interval_splits(1, x)) {
        return Rule::Split(x);
    }
    for y in 1..n - 1 {
        for x in 1..n - y {
            if p.interval_splits(x + 1, x + y) {
                return Rule::Internal(x, y);
            }
        }
    }
    if p.is_one() {
        return Rule::One;
    }
    if p.is_zero() {
        return Rule::Zero;
    }
    Rule::Core
}

/// Recursion context for the rewrite engine.
trait Cores: Sync {
    fn lambda(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>>;
    fn core(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>>;
    fn core_tau(&self, p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Option<Rational>>;

    fn tau(&self, p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Option<Rational>> {
        if applicable_rule(p) == Rule::Core {
            return self.core_tau(p, gs, gn);
        }
        Ok(self.lambda(p, gs)?.map(|f| (&f * gn).tau()))
    }
}

fn reduce_step(ctx: &dyn Cores, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
    let n = p.n();
    match applicable_rule(p) {
        Rule::Zero => Ok(Some(PiecewisePoly::product(gs.iter()))),
        Rule::One => Ok(Some(PiecewisePoly::constant(
            gs.iter().map(PiecewisePoly::tau).fold(Rational::one(), |a, b| a * b),
        ))),
        Rule::Glue(k) => {
            let c = gs[k - 1].tau();
            if c.is_zero() {
                return Ok(Some(PiecewisePoly::zero()));
            }
            let mut rest = gs.to_vec();
            rest.remove(k - 1);
            Ok(ctx.lambda(&p.glue(k), &rest)?.map(|f| f.scale(&c)))
        }
        Rule::WrapAround => {
            let inner = p.restrict_range(1, n - 1);
            Ok(ctx.tau(&inner, &gs[..n - 2], &gs[n - 2])?.map(PiecewisePoly::constant))
        }
        Rule::Split(x) => {
            let Some(left) = ctx.lambda(&p.restrict_range(1, x), &gs[..x - 1])? else {
                return Ok(None);
            };
            let Some(right) = ctx.lambda(&p.restrict_range(x + 1, n), &gs[x..])? else {
                return Ok(None);
            };
            Ok(Some(&(&left * &gs[x - 1]) * &right))
        }
        Rule::Internal(x, y) => {
            let inner = p.restrict_range(x + 1, x + y);
            let Some(mid) = ctx.lambda(&inner, &gs[x..x + y - 1])? else {
                return Ok(None);
            };
            let merged = &(&gs[x - 1] * &mid) * &gs[x + y - 1];
            let keep: Vec<usize> = (1..=x).chain(x + y + 1..=n).collect();
            let outer = p.restrict(&keep)?;
            let mut args: Vec<PiecewisePoly> = gs[..x - 1].to_vec();
            args.push(merged);
            args.extend_from_slice(&gs[x + y..]);
            ctx.lambda(&outer, &args)
        }
        Rule::Core => ctx.core(p, gs),
    }
}

struct Pure;

impl Cores for Pure {
    fn lambda(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
        reduce_step(self, p, gs)
    }
    fn core(&self, _: &SetPartition, _: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
        Ok(None)
    }
    fn core_tau(&self, _: &SetPartition, _: &[PiecewisePoly], _: &PiecewisePoly) -> Result<Option<Rational>> {
        Ok(None)
    }
}

/// Closed form of `Λ_π(gs)` from the reduction rules alone; `None` when a
/// purely crossing core is reached anywhere in the recursion.
pub fn lambda_reduce(p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
    check_arity(p, gs.len())?;
    Pure.lambda(p, gs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Reduced,
    Interpolated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaValue {
    Point { t: Rational, v: Rational },
    Function { f: PiecewisePoly, provenance: Provenance },
}

type FnKey = (SetPartition, Vec<PiecewisePoly>);

#[derive(Debug, Default)]
pub struct LambdaStats {
    pub cores_interpolated: AtomicUsize,
    pub lifted_integrals: AtomicUsize,
    pub point_evaluations: AtomicUsize,
    pub cache_hits: AtomicUsize,
}

/// Memoizing `Λ` engine: rewrite rules, with cores reconstructed by
/// interpolation and cached.
#[derive(Debug)]
pub struct LambdaEngine {
    cache: Arc<LambdaCache>,
    fn_memo: RwLock<HashMap<FnKey, PiecewisePoly>>,
    tau_memo: RwLock<HashMap<(FnKey, PiecewisePoly), Rational>>,
    pub stats: LambdaStats,
}

impl Default for LambdaEngine {
    fn default() -> Self {
        LambdaEngine::new(Arc::new(LambdaCache::in_memory()))
    }
}

impl LambdaEngine {
    pub fn new(cache: Arc<LambdaCache>) -> Self {
        LambdaEngine {
            cache,
            fn_memo: RwLock::new(HashMap::new()),
            tau_memo: RwLock::new(HashMap::new()),
            stats: LambdaStats::default(),
        }
    }

    pub fn cache(&self) -> &Arc<LambdaCache> {
        &self.cache
    }

    /// `Λ_π(gs)` as an element of `C[0,1]`.
    pub fn lambda_function(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<PiecewisePoly> {
        check_arity(p, gs.len())?;
        Ok(Cores::lambda(self, p, gs)?.expect("cores are always resolved"))
    }

    pub fn lambda_value(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<LambdaValue> {
        let f = self.lambda_function(p, gs)?;
        let provenance = if lambda_reduce(p, gs)?.is_some() {
            Provenance::Reduced
        } else {
            Provenance::Interpolated
        };
        Ok(LambdaValue::Function { f, provenance })
    }

    /// `Λ_π(gs)(t)` by the polytope engine, memoized through the cache.
    pub fn lambda_at(&self, p: &SetPartition, gs: &[PiecewisePoly], t: &Rational) -> Result<Rational> {
        check_arity(p, gs.len())?;
        check_t(t)?;
        let refs: Vec<&PiecewisePoly> = gs.iter().collect();
        let key = cache_key(p, &refs, KeyPoint::Point(t));
        if let Some(v) = self.cached_rational(&key) {
            return Ok(v);
        }
        self.stats.point_evaluations.fetch_add(1, Ordering::Relaxed);
        let v = eval_refs(p, &refs, t)?;
        self.store_rational(key, "point", "polytope", &v)?;
        Ok(v)
    }

    /// `τ(Λ_π(gs)·g_n)`.
    pub fn tau_lambda(&self, p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Rational> {
        check_arity(p, gs.len())?;
        Ok(Cores::tau(self, p, gs, gn)?.expect("cores are always resolved"))
    }

    fn cached_rational(&self, key: &str) -> Option<Rational> {
        let r = self.cache.lookup(key)?;
        match r.payload.as_str().and_then(parse_rational) {
            Some(v) => {
                self.stats.cache_hits.fetch_add(1, Ordering::Relaxed);
                Some(v)
            }
            None => {
                log::warn!("cache entry {key} has a malformed payload; recomputing");
                None
            }
        }
    }

    fn store_rational(&self, key: String, kind: &str, engine: &str, v: &Rational) -> Result<()> {
        self.cache.store(CacheRecord {
            key,
            kind: kind.into(),
            payload: serde_json::Value::String(fmt_rational(v)),
            engine: engine.into(),
            version: CACHE_VERSION,
        })
    }

    fn interpolate_core(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<PiecewisePoly> {
        let refs: Vec<&PiecewisePoly> = gs.iter().collect();
        let key = cache_key(p, &refs, KeyPoint::Function);
        if let Some(rec) = self.cache.lookup(&key) {
            match serde_json::from_value::<PiecewiseJson>(rec.payload.clone())
                .ok()
                .and_then(|j| PiecewisePoly::from_json(&j).ok())
            {
                Some(f) => {
                    self.stats.cache_hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(f);
                }
                None => log::warn!("cache entry {key} has a malformed payload; recomputing"),
            }
        }
        self.stats.cores_interpolated.fetch_add(1, Ordering::Relaxed);
        let bps = breakpoint_candidates(p, &refs)?;
        let deg = default_degree(p, &refs);
        let pieces = bps
            .windows(2)
            .map(|w| interpolate_refs(&w[0], &w[1], deg, &|t| self.lambda_at(p, gs, t)))
            .collect::<Result<Vec<_>>>()?;
        let f = PiecewisePoly::new(bps, pieces)?;
        self.cache.store(CacheRecord {
            key,
            kind: "function".into(),
            payload: serde_json::to_value(f.to_json()).expect("serializable"),
            engine: "interpolate".into(),
            version: CACHE_VERSION,
        })?;
        Ok(f)
    }
}

impl Cores for LambdaEngine {
    fn lambda(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
        let key = (p.clone(), gs.to_vec());
        if let Some(f) = self.fn_memo.read().unwrap().get(&key) {
            return Ok(Some(f.clone()));
        }
        let f = reduce_step(self, p, gs)?.expect("cores are always resolved");
        self.fn_memo.write().unwrap().insert(key, f.clone());
        Ok(Some(f))
    }

    fn core(&self, p: &SetPartition, gs: &[PiecewisePoly]) -> Result<Option<PiecewisePoly>> {
        self.interpolate_core(p, gs).map(Some)
    }

    fn core_tau(&self, p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Option<Rational>> {
        let mkey = ((p.clone(), gs.to_vec()), gn.clone());
        if let Some(v) = self.tau_memo.read().unwrap().get(&mkey) {
            return Ok(Some(v.clone()));
        }
        let mut refs: Vec<&PiecewisePoly> = gs.iter().collect();
        refs.push(gn);
        let key = cache_key(p, &refs, KeyPoint::Tau);
        let v = match self.cached_rational(&key) {
            Some(v) => v,
            None => {
                self.stats.lifted_integrals.fetch_add(1, Ordering::Relaxed);
                let v = lifted_refs(p, &refs)?;
                self.store_rational(key, "tau", "lifted", &v)?;
                v
            }
        };
        self.tau_memo.write().unwrap().insert(mkey, v.clone());
        Ok(Some(v))
    }
}

/// `τ(Λ_π(g₁..g_{n−1})·g_n)` on a fresh in-memory engine. In debug builds
/// small cases are checked against the rotated form.
pub fn tau_lambda(p: &SetPartition, gs: &[PiecewisePoly], gn: &PiecewisePoly) -> Result<Rational> {
    let engine = LambdaEngine::default();
    let v = engine.tau_lambda(p, gs, gn)?;
    if cfg!(debug_assertions) && p.n() <= 4 && p.n() >= 2 {
        let mut rotated: Vec<PiecewisePoly> = gs[1..].to_vec();
        rotated.push(gn.clone());
        let w = tau_lambda_lifted(&p.rotate_left(), &rotated, &gs[0])?;
        debug_assert_eq!(v, w, "rotation identity failed for {p}");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, SetPartition};
    use crate::rational::{int, q};

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn ones(k: usize) -> Vec<PiecewisePoly> {
        vec![PiecewisePoly::one(); k]
    }

    fn poly(cs: &[(i64, i64)]) -> PiecewisePoly {
        PiecewisePoly::from_poly(Poly::new(cs.iter().map(|&(a, b)| q(a, b)).collect()))
    }

    fn pi4_formula() -> PiecewisePoly {
        poly(&[(1, 2), (1, 1), (-1, 1)])
    }

    #[test]
    fn gamma_examples() {
        let gs = vec![PiecewisePoly::t(), poly(&[(1, 1), (1, 1)]), poly(&[(0, 1), (0, 1), (1, 1)])];
        assert_eq!(gamma(&SetPartition::one(3), &gs).unwrap(), PiecewisePoly::product(gs.iter()));
        let expect = (&gs[0] * &gs[1]).scale(&gs[2].tau());
        assert_eq!(gamma(&p("{1,2|3}"), &gs).unwrap(), expect);
        for n in 1..=6 {
            for pi in enumerate_partitions(n).unwrap() {
                assert!(gamma(&pi, &ones(n)).unwrap().is_one());
            }
        }
        assert!(gamma(&p("{1,2|3}"), &gs[..2]).is_err());
    }

    #[test]
    fn eval_examples() {
        let gs = vec![PiecewisePoly::t(), poly(&[(2, 1), (0, 1), (1, 1)]), poly(&[(1, 3), (1, 1)])];
        let taus = gs.iter().map(PiecewisePoly::tau).fold(int(1), |a, b| a * b);
        for t in [int(0), q(1, 3), int(1)] {
            assert_eq!(lambda_eval_at(&SetPartition::one(4), &gs, &t).unwrap(), taus);
        }
        let pi4 = p("{1,3|2,4}");
        assert_eq!(lambda_eval_at(&pi4, &ones(3), &q(1, 3)).unwrap(), q(13, 18));
        let t = q(2, 7);
        let two = &gs[..2];
        let want = gs[0].eval_at(&t).unwrap() * gs[1].eval_at(&t).unwrap();
        assert_eq!(lambda_eval_at(&SetPartition::zero(3), two, &t).unwrap(), want);
        assert_eq!(lambda_eval_at(&SetPartition::one(1), &[], &t).unwrap(), int(1));
        assert!(lambda_eval_at(&pi4, &ones(3), &q(3, 2)).is_err());
        assert!(lambda_eval_at(&pi4, &ones(2), &t).is_err());
    }

    #[test]
    fn pi4_profile() {
        let pi4 = p("{1,3|2,4}");
        for t in [int(0), q(1, 4), q(1, 3), q(1, 2), int(1)] {
            let want = pi4_formula().eval_at(&t).unwrap();
            assert_eq!(lambda_eval_at(&pi4, &ones(3), &t).unwrap(), want);
        }
        let f = lambda_interpolate(&pi4, &ones(3), &int(0), &int(1), 2).unwrap();
        assert_eq!(PiecewisePoly::from_poly(f), pi4_formula());
        let engine = LambdaEngine::default();
        assert_eq!(engine.lambda_function(&pi4, &ones(3)).unwrap(), pi4_formula());
    }

    #[test]
    fn interpolation_examples() {
        let gs = vec![PiecewisePoly::t(), poly(&[(1, 1), (1, 1)])];
        let f = lambda_interpolate_default(&SetPartition::one(3), &gs, &int(0), &int(1)).unwrap();
        assert_eq!(f, Poly::constant(q(1, 2) * q(3, 2)));
        let f = lambda_interpolate(&SetPartition::zero(2), &[PiecewisePoly::t()], &int(0), &int(1), 1).unwrap();
        assert_eq!(f, Poly::t());
        // a step argument has a jump at 1/2, which the checks must notice
        let step = PiecewisePoly::new(vec![int(0), q(1, 2), int(1)], vec![Poly::one(), Poly::zero()]).unwrap();
        assert!(matches!(
            lambda_interpolate(&SetPartition::zero(2), &[step], &int(0), &int(1), 1),
            Err(Error::BreakpointInside { .. })
        ));
    }

    #[test]
    fn reduce_examples() {
        let g = vec![poly(&[(1, 1), (2, 1)]), poly(&[(0, 1), (1, 1), (1, 1)])];
        let f = lambda_reduce(&p("{1,2|3}"), &g).unwrap().unwrap();
        assert_eq!(f, g[1].scale(&g[0].tau()));
        for t in [int(0), q(1, 4), q(1, 2), int(1)] {
            assert_eq!(f.eval_at(&t).unwrap(), lambda_eval_at(&p("{1,2|3}"), &g, &t).unwrap());
        }
        assert_eq!(lambda_reduce(&p("{1,3|2,4}"), &ones(3)).unwrap(), None);
        for n in 1..=6 {
            for pi in enumerate_partitions(n).unwrap().into_iter().filter(SetPartition::is_noncrossing) {
                assert!(lambda_reduce(&pi, &ones(n - 1)).unwrap().unwrap().is_one(), "{pi}");
            }
        }
    }

    #[test]
    fn wrap_around_is_constant() {
        let gs = vec![PiecewisePoly::t(), poly(&[(1, 1), (0, 1), (1, 1)]), poly(&[(2, 1), (-1, 1)])];
        for pi in enumerate_partitions(4).unwrap().into_iter().filter(|x| x.same_block(1, 4)) {
            let f = lambda_interpolate_default(&pi, &gs, &int(0), &int(1)).unwrap();
            assert_eq!(f.degree(), 0, "{pi}");
            let inner = pi.restrict_range(1, 3);
            let want = tau_lambda_lifted(&inner, &gs[..2], &gs[2]).unwrap();
            assert_eq!(f.as_constant().unwrap(), want);
        }
    }

    #[test]
    fn tau_examples() {
        let pi4 = p("{1,3|2,4}");
        assert_eq!(tau_lambda(&pi4, &ones(3), &PiecewisePoly::one()).unwrap(), q(2, 3));
        let total = enumerate_partitions(4)
            .unwrap()
            .iter()
            .map(|pi| tau_lambda(pi, &ones(3), &PiecewisePoly::one()).unwrap())
            .fold(int(0), |a, b| a + b);
        assert_eq!(total, q(44, 3));
    }

    #[test]
    fn engine_caches_cores() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let pi = p("{1,4|2,5|3,6}");
        let f1 = {
            let e = LambdaEngine::new(Arc::new(LambdaCache::open(&path).unwrap()));
            let f = e.lambda_function(&pi, &ones(5)).unwrap();
            assert_eq!(e.stats.cores_interpolated.load(Ordering::Relaxed), 1);
            f
        };
        let e = LambdaEngine::new(Arc::new(LambdaCache::open(&path).unwrap()));
        let f2 = e.lambda_function(&pi, &ones(5)).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(e.stats.cores_interpolated.load(Ordering::Relaxed), 0);
        assert_eq!(e.stats.point_evaluations.load(Ordering::Relaxed), 0);
    }
}
