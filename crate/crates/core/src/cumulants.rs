//! `C[0,1]`-valued cumulants on alternating patterns, and a moment to
//! cumulant inversion over noncrossing partitions used to cross-check them.

use std::collections::HashMap;
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{PiecewisePoly, Poly};
use crate::lambda::{gamma, LambdaEngine};
use crate::moments::{Letter, MomentEngine, Word};
use crate::partitions::{enumerate_purely_crossing, SetPartition, Star, StarPattern};
use crate::rational::{q, Rational};

pub const MAX_ORDER: usize = 8;

/// Largest number of letters the inversion oracle accepts.
pub const INVERSION_GUARD: usize = 8;

/// `1` starts with `X`, `2` with `X*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CumulantPattern {
    XFirst = 1,
    StarFirst = 2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantArgs {
    n: usize,
    pattern: CumulantPattern,
    b: Vec<PiecewisePoly>,
}

impl CumulantArgs {
    pub fn new(n: usize, pattern: CumulantPattern, b: Vec<PiecewisePoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("cumulant order must be at least 1".into()));
        }
        if b.len() != 2 * n - 1 {
            return Err(Error::Argument(format!(
                "order {n} takes {} coefficients, got {}",
                2 * n - 1,
                b.len()
            )));
        }
        Ok(CumulantArgs { n, pattern, b })
    }

    /// All coefficients equal to `1`.
    pub fn ones(n: usize, pattern: CumulantPattern) -> Result<Self> {
        CumulantArgs::new(n, pattern, vec![PiecewisePoly::one(); 2 * n.max(1) - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pattern(&self) -> CumulantPattern {
        self.pattern
    }

    pub fn b_list(&self) -> &[PiecewisePoly] {
        &self.b
    }

    /// `b_i`, 1-based.
    fn b(&self, i: usize) -> &PiecewisePoly {
        &self.b[i - 1]
    }

    pub fn star_pattern(&self) -> StarPattern {
        let (a, b) = match self.pattern {
            CumulantPattern::XFirst => (Star::One, Star::Star),
            CumulantPattern::StarFirst => (Star::Star, Star::One),
        };
        StarPattern::new((0..2 * self.n).map(|i| if i % 2 == 0 { a } else { b }).collect()).expect("nonempty")
    }
}

fn every_other(b: &[PiecewisePoly], first: usize, count: usize) -> Vec<PiecewisePoly> {
    (0..count).map(|k| b[first - 1 + 2 * k].clone()).collect()
}

/// The sum over purely crossing partitions, without the order-8 corrections.
pub fn alpha_pc_sum(args: &CumulantArgs, lambda: &LambdaEngine) -> Result<PiecewisePoly> {
    let n = args.n;
    if n > MAX_ORDER {
        return Err(unsupported(n));
    }
    let pcs = enumerate_purely_crossing(n)?;
    let b = &args.b;
    let terms: Vec<PiecewisePoly> = match args.pattern {
        CumulantPattern::XFirst => {
            let mut gam = vec![PiecewisePoly::one()];
            gam.extend(every_other(b, 2, n - 1));
            let lam = every_other(b, 1, n - 1);
            pcs.par_iter()
                .map(|p| Ok(gamma(p, &gam)?.scale(&lambda.tau_lambda(p, &lam, &b[2 * n - 2])?)))
                .collect::<Result<_>>()?
        }
        CumulantPattern::StarFirst => {
            let gam = every_other(b, 1, n);
            let lam = every_other(b, 2, n - 1);
            pcs.par_iter()
                .map(|p| Ok(lambda.lambda_function(p, &lam)?.scale(&gamma(p, &gam)?.tau())))
                .collect::<Result<_>>()?
        }
    };
    Ok(terms.iter().fold(PiecewisePoly::zero(), |acc, t| &acc + t))
}

fn unsupported(n: usize) -> Error {
    Error::Unsupported(format!(
        "cumulants of order {n} are not available: closed forms are known only up to order {MAX_ORDER}"
    ))
}

fn pi4() -> SetPartition {
    SetPartition::from_labels(&[0, 1, 0, 1])
}

/// The four subtracted terms of the order-8 formula, in order.
pub fn order8_corrections(args: &CumulantArgs, lambda: &LambdaEngine) -> Result<[PiecewisePoly; 4]> {
    if args.n != 8 {
        return Err(Error::Argument("corrections exist only at order 8".into()));
    }
    let p4 = pi4();
    let b = |i: usize| args.b(i).clone();
    let tau = |ix: &[usize]| PiecewisePoly::product(ix.iter().map(|&i| args.b(i))).tau();
    let lam = |i: usize, j: usize, k: usize| lambda.lambda_function(&p4, &[b(i), b(j), b(k)]);
    let tlam = |i: usize, j: usize, k: usize, l: usize| lambda.tau_lambda(&p4, &[b(i), b(j), b(k)], args.b(l));
    let c = |x: Rational| PiecewisePoly::constant(x);
    let prod = |fs: &[PiecewisePoly]| PiecewisePoly::product(fs.iter());
    Ok(match args.pattern {
        CumulantPattern::XFirst => [
            prod(&[
                c(tau(&[2, 6])), b(4), b(8), c(tau(&[10, 14])), b(12),
                c(tlam(1, 3, 5, 7)?), c(tlam(9, 11, 13, 15)?),
            ]),
            prod(&[
                c(tau(&[2, 6, 10, 14])), b(4), c(tau(&[8, 12])),
                c(tlam(1, 3, 5, 15)?), c(tlam(7, 9, 11, 13)?),
            ]),
            prod(&[
                c(tau(&[2, 14])), b(4), b(8), c(tau(&[6, 10])), b(12),
                c(tlam(1, 3, 13, 15)?), c(tlam(5, 7, 9, 11)?),
            ]),
            prod(&[
                c(tau(&[2, 6, 10, 14])), c(tau(&[4, 8])), b(12),
                c(tlam(1, 11, 13, 15)?), c(tlam(3, 5, 7, 9)?),
            ]),
        ],
        CumulantPattern::StarFirst => [
            prod(&[
                c(tau(&[1, 5, 9, 13])), c(tau(&[3, 7])), c(tau(&[11, 15])),
                c(tlam(2, 4, 6, 8)?), lam(10, 12, 14)?,
            ]),
            prod(&[
                c(tau(&[1, 13])), c(tau(&[3, 7, 11, 15])), c(tau(&[5, 9])),
                lam(2, 12, 14)?, c(tlam(4, 6, 8, 10)?),
            ]),
            prod(&[
                c(tau(&[1, 5, 9, 13])), c(tau(&[3, 15])), c(tau(&[7, 11])),
                lam(2, 4, 14)?, c(tlam(6, 8, 10, 12)?),
            ]),
            prod(&[
                c(tau(&[1, 5])), c(tau(&[3, 7, 11, 15])), c(tau(&[9, 13])),
                lam(2, 4, 6)?, c(tlam(8, 10, 12, 14)?),
            ]),
        ],
    })
}

/// `α⁽¹⁾ₙ` or `α⁽²⁾ₙ` for `1 ≤ n ≤ 8`.
pub fn alpha(args: &CumulantArgs, lambda: &LambdaEngine) -> Result<PiecewisePoly> {
    match args.n {
        0 => unreachable!("checked in CumulantArgs::new"),
        1 => Ok(PiecewisePoly::constant(args.b(1).tau())),
        n if n > MAX_ORDER => Err(unsupported(n)),
        8 => {
            let mut v = alpha_pc_sum(args, lambda)?;
            for c in order8_corrections(args, lambda)? {
                v = &v - &c;
            }
            Ok(v)
        }
        _ => alpha_pc_sum(args, lambda),
    }
}

type CumKey = (Vec<Star>, Vec<PiecewisePoly>);

/// Cumulants `κ(X^{ε₁} b₁, X^{ε₂} b₂, …, X^{εₘ})` obtained by inverting the
/// moment expansion over noncrossing partitions, first block first.
pub struct Inverter<'a> {
    moments: &'a MomentEngine,
    memo: RwLock<HashMap<CumKey, PiecewisePoly>>,
}

impl<'a> Inverter<'a> {
    pub fn new(moments: &'a MomentEngine) -> Self {
        Inverter { moments, memo: RwLock::new(HashMap::new()) }
    }

    /// `b` holds the `m − 1` coefficients between the letters.
    pub fn cumulant(&self, eps: &StarPattern, b: &[PiecewisePoly]) -> Result<PiecewisePoly> {
        let m = eps.len();
        if m > INVERSION_GUARD {
            return Err(Error::ResourceLimit(format!(
                "inversion over {m} letters exceeds the guard of {INVERSION_GUARD}"
            )));
        }
        if b.len() + 1 != m {
            return Err(Error::Argument(format!("{m} letters take {} coefficients, got {}", m - 1, b.len())));
        }
        self.kappa(eps.eps(), b)
    }

    fn moment(&self, eps: &[Star], b: &[PiecewisePoly]) -> Result<PiecewisePoly> {
        if eps.is_empty() {
            return Ok(PiecewisePoly::one());
        }
        let mut letters = Vec::with_capacity(2 * eps.len());
        for (i, s) in eps.iter().enumerate() {
            if i > 0 {
                letters.push(Letter::Coeff(b[i - 1].clone()));
            }
            letters.push(if *s == Star::One { Letter::X } else { Letter::XStar });
        }
        Ok(self.moments.expectation(&Word::new(letters))?.value)
    }

    fn kappa(&self, eps: &[Star], b: &[PiecewisePoly]) -> Result<PiecewisePoly> {
        let key = (eps.to_vec(), b.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let m = eps.len();
        let mut v = self.moment(eps, b)?;
        // first blocks V ∋ 1 other than the full set
        for mask in 0u32..(1 << (m - 1)) {
            if mask == (1 << (m - 1)) - 1 {
                continue;
            }
            let block: Vec<usize> = std::iter::once(0).chain((1..m).filter(|i| mask & (1 << (i - 1)) != 0)).collect();
            let term = self.block_term(eps, b, &block)?;
            v = &v - &term;
        }
        self.memo.write().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// `κ_s(a_{v₁} c₁, …, a_{v_s}) · b_{v_s} 𝔈(tail)` for the first block `v`.
    fn block_term(&self, eps: &[Star], b: &[PiecewisePoly], v: &[usize]) -> Result<PiecewisePoly> {
        let m = eps.len();
        let mut inner = Vec::with_capacity(v.len() - 1);
        for w in v.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let c = if hi == lo + 1 {
                b[lo].clone()
            } else {
                let nested = self.moment(&eps[lo + 1..hi], &b[lo + 1..hi - 1])?;
                PiecewisePoly::product([&b[lo], &nested, &b[hi - 1]])
            };
            if c.is_zero() {
                return Ok(PiecewisePoly::zero());
            }
            inner.push(c);
        }
        let sub_eps: Vec<Star> = v.iter().map(|&i| eps[i]).collect();
        let last = *v.last().unwrap();
        let tail = if last + 1 == m {
            PiecewisePoly::one()
        } else {
            let rest = self.moment(&eps[last + 1..], &b[last + 1..])?;
            &b[last] * &rest
        };
        if tail.is_zero() {
            return Ok(tail);
        }
        Ok(&self.kappa(&sub_eps, &inner)? * &tail)
    }
}

pub fn cumulant_by_inversion(moments: &MomentEngine, eps: &StarPattern, b: &[PiecewisePoly]) -> Result<PiecewisePoly> {
    Inverter::new(moments).cumulant(eps, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyRow {
    pub pattern: String,
    pub b_list: Vec<String>,
    /// `None` where no closed form applies (non-alternating or odd patterns).
    pub alpha: Option<String>,
    pub inversion: String,
    pub equal: bool,
}

/// A random polynomial of degree at most 2 with small rational coefficients.
pub fn random_coefficient(rng: &mut impl Rng) -> PiecewisePoly {
    let coeffs = (0..3).map(|_| q(rng.random_range(-4..=4), rng.random_range(1..=4))).collect();
    PiecewisePoly::from_poly(Poly::new(coeffs))
}

fn all_patterns(len: usize) -> Vec<StarPattern> {
    (0..1u32 << len)
        .map(|bits| {
            StarPattern::new((0..len).map(|i| if bits & (1 << i) == 0 { Star::One } else { Star::Star }).collect())
                .expect("nonempty")
        })
        .collect()
}

/// Compares `alpha` with the inversion oracle on random coefficient lists:
/// alternating patterns of even length up to `2·n_max`, and every other
/// pattern up to length `min(2·n_max, 4)`, where the oracle must vanish.
pub fn consistency_report(moments: &MomentEngine, n_max: usize, seed: u64) -> Result<Vec<ConsistencyRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv = Inverter::new(moments);
    let mut rows = Vec::new();
    for len in 1..=2 * n_max {
        for eps in all_patterns(len) {
            let alternating_even = eps.is_alternating() && len % 2 == 0;
            if !alternating_even && len > 4 {
                continue;
            }
            let b: Vec<PiecewisePoly> = (0..len - 1).map(|_| random_coefficient(&mut rng)).collect();
            let kappa = inv.cumulant(&eps, &b)?;
            let expected = if alternating_even {
                let pattern = if eps.eps()[0] == Star::One { CumulantPattern::XFirst } else { CumulantPattern::StarFirst };
                alpha(&CumulantArgs::new(len / 2, pattern, b.clone())?, moments.lambda_engine())?
            } else {
                PiecewisePoly::zero()
            };
            rows.push(ConsistencyRow {
                pattern: eps.to_string(),
                b_list: b.iter().map(ToString::to_string).collect(),
                alpha: alternating_even.then(|| expected.to_string()),
                inversion: kappa.to_string(),
                equal: kappa == expected,
            });
        }
    }
    Ok(rows)
}
