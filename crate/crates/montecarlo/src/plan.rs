//! A word compiled for one matrix size: matrix letters and discretized
//! diagonal coefficients.

use ndarray::Array1;

use vdm_core::funcspace::PiecewisePoly;
use vdm_core::moments::{Letter, Word};
use vdm_core::rational::{q, to_f64};

use crate::matrix::CMatrix;
use crate::sample::VandermondeSample;
use crate::McError;

#[derive(Clone, Debug, PartialEq)]
enum Factor {
    X,
    XStar,
    Diag(Vec<f64>),
}

/// `X_N` and its adjoint for one trial.
pub(crate) struct Mats {
    x: CMatrix,
    xs: CMatrix,
}

impl Mats {
    pub(crate) fn new(s: &VandermondeSample) -> Self {
        let x = s.matrix();
        let xs = x.adjoint();
        Mats { x, xs }
    }

    fn get(&self, f: &Factor) -> &CMatrix {
        match f {
            Factor::X => &self.x,
            Factor::XStar => &self.xs,
            Factor::Diag(_) => unreachable!("diagonal factors are applied by scaling"),
        }
    }
}

/// `D_N(b) = diag(b(1/N), …, b(N/N))`.
pub(crate) fn discretize(b: &PiecewisePoly, n: usize) -> Result<Vec<f64>, McError> {
    (1..=n)
        .map(|k| Ok(to_f64(&b.eval_at(&q(k as i64, n as i64)).map_err(vdm_core::Error::from)?)))
        .collect()
}

pub(crate) struct Plan {
    n: usize,
    factors: Vec<Factor>,
}

impl Plan {
    pub(crate) fn new(word: &Word, n: usize) -> Result<Self, McError> {
        if word.is_zero() {
            return Err(McError::Argument("the zero word has no matrix realization".into()));
        }
        let factors = word
            .letters()
            .iter()
            .map(|l| {
                Ok(match l {
                    Letter::X => Factor::X,
                    Letter::XStar => Factor::XStar,
                    Letter::Coeff(b) => Factor::Diag(discretize(b, n)?),
                })
            })
            .collect::<Result<_, McError>>()?;
        Ok(Plan { n, factors })
    }

    /// Product of `factors`, left to right.
    fn product(&self, factors: &[Factor], mats: &Mats) -> CMatrix {
        let mut acc: Option<CMatrix> = None;
        let mut pending: Option<Vec<f64>> = None;
        for f in factors {
            match (f, acc.as_mut()) {
                (Factor::Diag(d), Some(a)) => a.scale_cols(d),
                (Factor::Diag(d), None) => {
                    pending = Some(match pending {
                        Some(p) => p.iter().zip(d).map(|(a, b)| a * b).collect(),
                        None => d.clone(),
                    })
                }
                (m, Some(a)) => *a = a.mul(mats.get(m)),
                (m, None) => {
                    let mut first = mats.get(m).clone();
                    if let Some(p) = pending.take() {
                        first.scale_rows(&p);
                    }
                    acc = Some(first);
                }
            }
        }
        acc.unwrap_or_else(|| CMatrix::diag(&pending.unwrap_or_else(|| vec![1.0; self.n])))
    }

    pub(crate) fn dense(&self, mats: &Mats) -> CMatrix {
        self.product(&self.factors, mats)
    }

    /// `tr = Tr/N` of the word. Trailing coefficients are moved to the
    /// front, and a word that is a power `u^k` is evaluated by squaring.
    pub(crate) fn normalized_trace(&self, mats: &Mats) -> (f64, f64) {
        let mut fs = self.factors.clone();
        if fs.iter().all(|f| matches!(f, Factor::Diag(_))) {
            let d = self.product(&fs, mats);
            let (re, im) = d.trace();
            return (re / self.n as f64, im / self.n as f64);
        }
        while matches!(fs.last(), Some(Factor::Diag(_))) {
            let last = fs.pop().unwrap();
            fs.insert(0, last);
        }
        let (period, k) = smallest_period(&fs);
        let unit = self.product(&fs[..period], mats);
        let (re, im) = if k == 1 {
            let head = self.product(&fs[..fs.len() - 1], mats);
            head.trace_of_product(mats.get(fs.last().unwrap()))
        } else {
            let a = power(&unit, k.div_ceil(2));
            let b = if k.is_multiple_of(2) { a.clone() } else { power(&unit, k / 2) };
            a.trace_of_product(&b)
        };
        (re / self.n as f64, im / self.n as f64)
    }

    /// Entry `(h, h)` (0-based) of the word, by propagating the row `e_h`.
    pub(crate) fn diagonal_entry(&self, mats: &Mats, h: usize) -> (f64, f64) {
        let mut re = Array1::zeros(self.n);
        re[h] = 1.0;
        let mut v = (re, Array1::zeros(self.n));
        for f in &self.factors {
            match f {
                Factor::Diag(d) => {
                    let d = Array1::from(d.clone());
                    v = (&v.0 * &d, &v.1 * &d);
                }
                m => v = mats.get(m).row_times(&v),
            }
        }
        (v.0[h], v.1[h])
    }
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    if k == 1 {
        return m.clone();
    }
    let half = power(m, k / 2);
    let sq = half.mul(&half);
    if k.is_multiple_of(2) {
        sq
    } else {
        sq.mul(m)
    }
}

/// `(p, k)` with `fs = (fs[..p])^k` and `p` minimal.
fn smallest_period(fs: &[Factor]) -> (usize, usize) {
    let len = fs.len();
    (1..=len)
        .find(|&p| len.is_multiple_of(p) && (p..len).all(|i| fs[i] == fs[i - p]))
        .map(|p| (p, len / p))
        .unwrap_or((len, 1))
}

/// `Tr(M₁ ⋯ M_k)/N`.
pub(crate) fn normalized_trace_of_chain(ms: &[CMatrix]) -> (f64, f64) {
    let n = ms[0].dim() as f64;
    let (re, im) = match ms {
        [only] => only.trace(),
        [init @ .., last] => {
            let mut acc = init[0].clone();
            for m in &init[1..] {
                acc = acc.mul(m);
            }
            acc.trace_of_product(last)
        }
        [] => unreachable!(),
    };
    (re / n, im / n)
}
