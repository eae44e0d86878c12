//! `C[0,1]`-valued *-moments of the limit distribution.
//!
//! Even alternating words are summed over all set partitions using `Γ` and
//! `Λ`. Odd alternating words vanish. Any other word is split into maximal
//! alternating runs; the centered product of the runs has zero expectation,
//! which expresses the word through strictly shorter words.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::PiecewisePoly;
use crate::lambda::{gamma, LambdaEngine};
use crate::partitions::{enumerate_partitions_guarded, max_alternating_interval_partition, Star, StarPattern};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    XStar,
    Coeff(PiecewisePoly),
}

/// A word in `X`, `X*` and coefficients from `C[0,1]`, kept normalized:
/// adjacent coefficients are multiplied, unit coefficients dropped, and a
/// zero coefficient collapses the word to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    zero: bool,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            match l {
                Letter::Coeff(f) => {
                    if f.is_zero() {
                        return Word::zero();
                    }
                    match out.last_mut() {
                        Some(Letter::Coeff(prev)) => {
                            *prev = &*prev * &f;
                            if prev.is_one() {
                                out.pop();
                            }
                        }
                        _ if f.is_one() => {}
                        _ => out.push(Letter::Coeff(f)),
                    }
                }
                m => out.push(m),
            }
        }
        Word { letters: out, zero: false }
    }

    /// The empty word, whose expectation is `1`.
    pub fn empty() -> Word {
        Word { letters: Vec::new(), zero: false }
    }

    pub fn zero() -> Word {
        Word { letters: Vec::new(), zero: true }
    }

    pub fn coeff(f: PiecewisePoly) -> Word {
        Word::new(vec![Letter::Coeff(f)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Number of `X`/`X*` letters.
    pub fn matrix_len(&self) -> usize {
        self.letters.iter().filter(|l| !matches!(l, Letter::Coeff(_))).count()
    }

    /// The `1`/`*` pattern of the matrix letters, `None` for a word without any.
    pub fn star_pattern(&self) -> Option<StarPattern> {
        let eps: Vec<Star> = self
            .letters
            .iter()
            .filter_map(|l| match l {
                Letter::X => Some(Star::One),
                Letter::XStar => Some(Star::Star),
                Letter::Coeff(_) => None,
            })
            .collect();
        StarPattern::new(eps).ok()
    }

    pub fn concat(&self, other: &Word) -> Word {
        if self.zero || other.zero {
            return Word::zero();
        }
        Word::new(self.letters.iter().chain(&other.letters).cloned().collect())
    }

    /// The adjoint word; coefficients are real so they are self-adjoint.
    pub fn adjoint(&self) -> Word {
        if self.zero {
            return Word::zero();
        }
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::X => Letter::XStar,
                Letter::XStar => Letter::X,
                c => c.clone(),
            })
            .collect();
        Word::new(letters)
    }

    /// Cyclic rotation by `k` letters to the left.
    pub fn rotate(&self, k: usize) -> Word {
        if self.zero || self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut v = self.letters[k..].to_vec();
        v.extend_from_slice(&self.letters[..k]);
        Word::new(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_word(self))
    }
}

/// A finite sum of words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: Vec<Word>,
}

impl From<Word> for WordPoly {
    fn from(w: Word) -> Self {
        if w.is_zero() {
            WordPoly::default()
        } else {
            WordPoly { terms: vec![w] }
        }
    }
}

impl WordPoly {
    pub fn terms(&self) -> &[Word] {
        &self.terms
    }

    pub fn add(&self, other: &WordPoly) -> WordPoly {
        WordPoly { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    pub fn mul(&self, other: &WordPoly) -> WordPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let w = a.concat(b);
                if !w.is_zero() {
                    terms.push(w);
                }
            }
        }
        WordPoly { terms }
    }

    pub fn neg(&self) -> WordPoly {
        let minus = Word::coeff(PiecewisePoly::constant(-Rational::one()));
        WordPoly { terms: self.terms.iter().map(|w| minus.concat(w)).collect() }
    }

    pub fn max_matrix_len(&self) -> usize {
        self.terms.iter().map(Word::matrix_len).max().unwrap_or(0)
    }
}

impl fmt::Display for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_expr(self))
    }
}

/// Resource guards for the moment engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest `n` for which an alternating word of length `2n` is summed over `P(n)`.
    pub max_alternating_n: usize,
    /// Largest number of matrix letters accepted in a requested word.
    pub max_matrix_letters: usize,
}

pub const DEFAULT_MAX_ALTERNATING_N: usize = 8;
pub const DEFAULT_MAX_MATRIX_LETTERS: usize = 16;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_alternating_n: DEFAULT_MAX_ALTERNATING_N,
            max_matrix_letters: DEFAULT_MAX_MATRIX_LETTERS,
        }
    }
}

impl Limits {
    /// Raised guards: words of any length, partition sums up to `P(10)`.
    pub fn overridden() -> Self {
        Limits {
            max_alternating_n: crate::partitions::DEFAULT_PARTITION_GUARD,
            max_matrix_letters: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DerivationStats {
    /// Deepest nesting of the centered-product recursion.
    pub max_depth: usize,
    /// Partitions summed over in alternating moments.
    pub partitions_summed: usize,
    /// Non-alternating words expanded by the recursion.
    pub words_expanded: usize,
    pub memo_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentResult {
    pub value: PiecewisePoly,
    pub stats: DerivationStats,
}

#[derive(Default)]
struct Counters {
    max_depth: AtomicUsize,
    partitions: AtomicUsize,
    expanded: AtomicUsize,
    memo_hits: AtomicUsize,
}

impl Counters {
    fn snapshot(&self) -> DerivationStats {
        DerivationStats {
            max_depth: self.max_depth.load(Ordering::Relaxed),
            partitions_summed: self.partitions.load(Ordering::Relaxed),
            words_expanded: self.expanded.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
        }
    }
}

/// Matrix letters with the coefficient in each gap between them.
#[derive(Clone, Debug)]
struct Core {
    mats: Vec<Star>,
    gaps: Vec<PiecewisePoly>,
}

impl Core {
    fn sub(&self, lo: usize, hi: usize) -> Core {
        Core { mats: self.mats[lo..=hi].to_vec(), gaps: self.gaps[lo..hi].to_vec() }
    }

    fn letters(&self) -> Vec<Letter> {
        let mut v = Vec::with_capacity(2 * self.mats.len());
        for (i, s) in self.mats.iter().enumerate() {
            if i > 0 {
                v.push(Letter::Coeff(self.gaps[i - 1].clone()));
            }
            v.push(match s {
                Star::One => Letter::X,
                Star::Star => Letter::XStar,
            });
        }
        v
    }

    fn word(&self) -> Word {
        Word::new(self.letters())
    }

    fn is_alternating(&self) -> bool {
        self.mats.windows(2).all(|w| w[0] != w[1])
    }
}

/// `w = scalar · left · core · right`, constant inner coefficients pulled
/// into `scalar`.
struct Decomposed {
    scalar: Rational,
    left: PiecewisePoly,
    right: PiecewisePoly,
    core: Core,
}

fn decompose(w: &Word) -> Option<Decomposed> {
    if w.is_zero() {
        return None;
    }
    let mut scalar = Rational::one();
    let mut left = PiecewisePoly::one();
    let mut right = PiecewisePoly::one();
    let mut mats = Vec::new();
    let mut gaps = Vec::new();
    let mut pending: Option<PiecewisePoly> = None;
    for l in w.letters() {
        match l {
            Letter::Coeff(f) => pending = Some(f.clone()),
            m => {
                let c = pending.take();
                if mats.is_empty() {
                    if let Some(c) = c {
                        left = c;
                    }
                } else {
                    match c {
                        Some(c) => match c.as_constant() {
                            Some(k) => {
                                scalar *= k;
                                gaps.push(PiecewisePoly::one());
                            }
                            None => gaps.push(c),
                        },
                        None => gaps.push(PiecewisePoly::one()),
                    }
                }
                mats.push(if *m == Letter::X { Star::One } else { Star::Star });
            }
        }
    }
    if let Some(c) = pending {
        if mats.is_empty() {
            left = c;
        } else {
            right = c;
        }
    }
    Some(Decomposed { scalar, left, right, core: Core { mats, gaps } })
}

/// Moment engine over a shared `Λ` engine, memoizing on normalized words.
pub struct MomentEngine {
    lambda: Arc<LambdaEngine>,
    limits: Limits,
    memo: RwLock<HashMap<Word, PiecewisePoly>>,
}

impl Default for MomentEngine {
    fn default() -> Self {
        MomentEngine::new(Arc::new(LambdaEngine::default()), Limits::default())
    }
}

impl MomentEngine {
    pub fn new(lambda: Arc<LambdaEngine>, limits: Limits) -> Self {
        MomentEngine { lambda, limits, memo: RwLock::new(HashMap::new()) }
    }

    pub fn lambda_engine(&self) -> &Arc<LambdaEngine> {
        &self.lambda
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn check_letters(&self, w: &Word) -> Result<()> {
        let m = w.matrix_len();
        if m > self.limits.max_matrix_letters {
            return Err(Error::ResourceLimit(format!(
                "word has {m} matrix letters, guard is {}; raise it with the guard override",
                self.limits.max_matrix_letters
            )));
        }
        Ok(())
    }

    /// `𝔈(w)` for an alternating word of even length.
    pub fn alternating_even_moment(&self, w: &Word) -> Result<PiecewisePoly> {
        self.check_letters(w)?;
        let d = decompose(w).ok_or_else(|| Error::Argument("zero word has no star pattern".into()))?;
        let m = d.core.mats.len();
        if m == 0 || m % 2 == 1 || !d.core.is_alternating() {
            return Err(Error::Argument(format!(
                "pattern {} is not alternating of even length; use the general expectation",
                w.star_pattern().map_or("(empty)".to_string(), |p| p.to_string())
            )));
        }
        let counters = Counters::default();
        let v = self.alternating(&d.core, &counters)?;
        Ok(&(&d.left * &v.scale(&d.scalar)) * &d.right)
    }

    pub fn expectation(&self, w: &Word) -> Result<MomentResult> {
        self.check_letters(w)?;
        let counters = Counters::default();
        let value = self.expect_word(w, 0, &counters)?;
        Ok(MomentResult { value, stats: counters.snapshot() })
    }

    /// `𝔈` of a sum of words.
    pub fn expectation_poly(&self, e: &WordPoly) -> Result<MomentResult> {
        for w in e.terms() {
            self.check_letters(w)?;
        }
        let counters = Counters::default();
        let mut acc = PiecewisePoly::zero();
        for w in e.terms() {
            acc = &acc + &self.expect_word(w, 0, &counters)?;
        }
        Ok(MomentResult { value: acc, stats: counters.snapshot() })
    }

    pub fn trace_moment(&self, w: &Word) -> Result<Rational> {
        Ok(self.expectation(w)?.value.tau())
    }

    pub fn trace_poly(&self, e: &WordPoly) -> Result<Rational> {
        Ok(self.expectation_poly(e)?.value.tau())
    }

    /// `𝔈(w)(t)` for an alternating even word.
    pub fn diagonal_limit(&self, w: &Word, t: &Rational) -> Result<Rational> {
        Ok(self.alternating_even_moment(w)?.eval_at(t)?)
    }

    /// For a word `X b₁ X* X b₂ X* ⋯ X bₙ X*`, whether its expectation is a
    /// constant.
    pub fn scalar_check(&self, w: &Word) -> Result<bool> {
        if !is_sandwich(w) {
            return Err(Error::Argument(format!("{w} is not of the form X b1 X* X b2 X* ... X bn X*")));
        }
        let v = self.expectation(w)?.value;
        Ok(v.is_single_piece() && v.degree() == 0)
    }

    fn expect_word(&self, w: &Word, depth: usize, counters: &Counters) -> Result<PiecewisePoly> {
        let Some(d) = decompose(w) else {
            return Ok(PiecewisePoly::zero());
        };
        let core = self.expect_core(&d.core, depth, counters)?;
        if core.is_zero() {
            return Ok(core);
        }
        Ok(&(&d.left * &core.scale(&d.scalar)) * &d.right)
    }

    fn expect_core(&self, core: &Core, depth: usize, counters: &Counters) -> Result<PiecewisePoly> {
        let m = core.mats.len();
        if m == 0 {
            return Ok(PiecewisePoly::one());
        }
        if core.is_alternating() && m % 2 == 1 {
            return Ok(PiecewisePoly::zero());
        }
        counters.max_depth.fetch_max(depth, Ordering::Relaxed);
        let key = core.word();
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            counters.memo_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v.clone());
        }
        let v = if core.is_alternating() {
            self.alternating(core, counters)?
        } else {
            self.centered_expansion(core, depth, counters)?
        };
        self.memo.write().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Sum over `P(n)` for `2n` alternating letters; `gaps[j-1]` is the
    /// coefficient between letters `j` and `j+1`.
    fn alternating(&self, core: &Core, counters: &Counters) -> Result<PiecewisePoly> {
        let n = core.mats.len() / 2;
        if n > self.limits.max_alternating_n {
            return Err(Error::ResourceLimit(format!(
                "alternating word of length {} needs a sum over P({n}); guard is n <= {}",
                2 * n,
                self.limits.max_alternating_n
            )));
        }
        let parts = enumerate_partitions_guarded(n, self.limits.max_alternating_n)?;
        counters.partitions.fetch_add(parts.len(), Ordering::Relaxed);
        let g = &core.gaps;
        let odd: Vec<PiecewisePoly> = (0..n).map(|i| g[2 * i].clone()).collect();
        let even: Vec<PiecewisePoly> = (0..n - 1).map(|i| g[2 * i + 1].clone()).collect();
        let terms: Vec<PiecewisePoly> = match core.mats[0] {
            // 𝔈(X* b₂ X b₃ X* ⋯ b_{2n} X) = Σ Λ_π(b₃, b₅, …) τ(Γ_π(b₂, b₄, …))
            Star::Star => parts
                .par_iter()
                .map(|p| {
                    let tg = gamma(p, &odd)?.tau();
                    if tg.is_zero() {
                        return Ok(PiecewisePoly::zero());
                    }
                    Ok(self.lambda.lambda_function(p, &even)?.scale(&tg))
                })
                .collect::<Result<_>>()?,
            // 𝔈(X b₂ X* b₃ X ⋯ b_{2n} X*) = Σ Γ_π(1, b₃, b₅, …) τ(Λ_π(b₂, b₄, …) b_{2n})
            Star::One => {
                let mut gam = vec![PiecewisePoly::one()];
                gam.extend(even.iter().cloned());
                let lam_args = &odd[..n - 1];
                let last = &odd[n - 1];
                parts
                    .par_iter()
                    .map(|p| {
                        let tl = self.lambda.tau_lambda(p, lam_args, last)?;
                        if tl.is_zero() {
                            return Ok(PiecewisePoly::zero());
                        }
                        Ok(gamma(p, &gam)?.scale(&tl))
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(terms.iter().fold(PiecewisePoly::zero(), |acc, t| &acc + t))
    }

    /// Solves the vanishing centered product over the maximal alternating
    /// runs for the full word.
    fn centered_expansion(&self, core: &Core, depth: usize, counters: &Counters) -> Result<PiecewisePoly> {
        counters.expanded.fetch_add(1, Ordering::Relaxed);
        let pattern = StarPattern::new(core.mats.clone())?;
        let sigma = max_alternating_interval_partition(&pattern);
        let runs: Vec<(usize, usize)> = sigma
            .blocks()
            .iter()
            .map(|b| (b[0] - 1, b[b.len() - 1] - 1))
            .collect();
        let subs: Vec<Core> = runs.iter().map(|&(lo, hi)| core.sub(lo, hi)).collect();
        let cs: Vec<PiecewisePoly> = subs
            .iter()
            .map(|s| self.expect_core(s, depth + 1, counters))
            .collect::<Result<_>>()?;
        // runs whose expectation vanishes must stay uncentered in every nonzero term
        let live: Vec<usize> = (0..runs.len()).filter(|&i| !cs[i].is_zero()).collect();
        if live.len() > 24 {
            return Err(Error::ResourceLimit(format!("{} centered runs", live.len())));
        }
        let mut acc = PiecewisePoly::zero();
        for mask in 1u32..(1u32 << live.len()) {
            let mut letters = Vec::new();
            for (i, sub) in subs.iter().enumerate() {
                let replaced = live.iter().position(|&l| l == i).is_some_and(|bit| mask & (1 << bit) != 0);
                if replaced {
                    letters.push(Letter::Coeff(-&cs[i]));
                } else {
                    letters.extend(sub.letters());
                }
                if i + 1 < subs.len() {
                    letters.push(Letter::Coeff(core.gaps[runs[i].1].clone()));
                }
            }
            let term = self.expect_word(&Word::new(letters), depth + 1, counters)?;
            acc = &acc - &term;
        }
        Ok(acc)
    }
}

fn is_sandwich(w: &Word) -> bool {
    if w.is_zero() {
        return false;
    }
    let l = w.letters();
    let mut i = 0;
    let mut blocks = 0;
    while i < l.len() {
        if l[i] != Letter::X {
            return false;
        }
        i += 1;
        if matches!(l.get(i), Some(Letter::Coeff(_))) {
            i += 1;
        }
        if l.get(i) != Some(&Letter::XStar) {
            return false;
        }
        i += 1;
        blocks += 1;
    }
    blocks > 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::syntax::{parse_expr, parse_poly, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn poly(s: &str) -> PiecewisePoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn word_normalization() {
        let a = w("[2] [1/2] X [t] [1] X*");
        assert_eq!(a.letters(), &[Letter::X, Letter::Coeff(poly("t")), Letter::XStar]);
        assert!(w("X [0] X*").is_zero());
        assert_eq!(w("X [t] X*").adjoint(), w("X [t] X*"));
        assert_eq!(w("X X X*").adjoint(), w("X X* X*"));
        assert_eq!(w("X* X X").star_pattern().unwrap().to_string(), "*11");
    }

    #[test]
    fn low_trace_moments() {
        let e = MomentEngine::default();
        for (k, v) in [(1, int(1)), (2, int(2)), (3, int(5)), (4, q(44, 3))] {
            assert_eq!(e.trace_moment(&w(&format!("(X* X)^{k}"))).unwrap(), v);
            assert_eq!(e.trace_moment(&w(&format!("(X X*)^{k}"))).unwrap(), v);
        }
    }

    #[test]
    fn quartic_profiles() {
        let e = MomentEngine::default();
        assert_eq!(e.expectation(&w("(X* X)^4")).unwrap().value, poly("29/2 + t - t^2"));
        assert_eq!(e.expectation(&w("(X X*)^4")).unwrap().value, PiecewisePoly::constant(q(44, 3)));
        assert_eq!(e.diagonal_limit(&w("(X* X)^4"), &q(1, 2)).unwrap(), q(59, 4));
    }

    #[test]
    fn coefficient_examples() {
        let e = MomentEngine::default();
        assert_eq!(e.expectation(&w("X [t] X* X [t] X*")).unwrap().value, PiecewisePoly::constant(q(7, 12)));
        for (b, tau_b) in [("t", q(1, 2)), ("t^2", q(1, 3))] {
            let v = e.expectation(&w(&format!("(X X*)^2 [{b}] (X X*)^2"))).unwrap().value;
            let want = &PiecewisePoly::constant(tau_b * int(10)) + &poly(b).scale(&q(14, 3));
            assert_eq!(v, want, "b' = {b}");
        }
    }

    #[test]
    fn vanishing_words() {
        let e = MomentEngine::default();
        for s in ["X", "X*", "X X", "X [t] X", "X X* X", "X* [t] X X*", "X X X"] {
            assert!(e.expectation(&w(s)).unwrap().value.is_zero(), "{s}");
        }
        // only the inner X X* run survives centering
        assert_eq!(e.expectation(&w("X X X* X*")).unwrap().value, PiecewisePoly::one());
        assert_eq!(e.expectation(&Word::empty()).unwrap().value, PiecewisePoly::one());
        assert_eq!(e.expectation(&w("[t]")).unwrap().value, poly("t"));
    }

    #[test]
    fn boundary_coefficients_factor_out() {
        let e = MomentEngine::default();
        let inner = e.expectation(&w("X* X X* X")).unwrap().value;
        let outer = e.expectation(&w("[t] X* X X* X [1 + t]")).unwrap().value;
        assert_eq!(outer, &(&poly("t") * &inner) * &poly("1 + t"));
    }

    #[test]
    fn alternating_gate() {
        let e = MomentEngine::default();
        assert!(matches!(e.alternating_even_moment(&w("X X*X")), Err(Error::Argument(_))));
        assert!(matches!(e.alternating_even_moment(&w("X X")), Err(Error::Argument(_))));
        let long = Word::new((0..9).flat_map(|_| [Letter::X, Letter::XStar]).collect());
        assert!(matches!(e.alternating_even_moment(&long), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn scalar_shape() {
        let e = MomentEngine::default();
        assert!(e.scalar_check(&w("X [t] X* X [t^2] X*")).unwrap());
        assert!(e.scalar_check(&w("X [1] X*")).unwrap());
        assert!(matches!(e.scalar_check(&w("(X* X)^4")), Err(Error::Argument(_))));
    }

    #[test]
    fn letter_guard() {
        let e = MomentEngine::default();
        let witness = parse_expr("((X* X)^4 - 44/3)((X X*)^2 - 2)((X* X)^4 - 44/3)((X X*)^2 - 2)").unwrap();
        assert_eq!(witness.max_matrix_len(), 24);
        assert!(matches!(e.expectation_poly(&witness), Err(Error::ResourceLimit(_))));
    }

    // hand expansion: 𝔈(X X X* X*) = 0 and τ(𝔈(X* X X X* X* X)) via runs {1,2},{3,4},{5,6}
    #[test]
    fn mixed_word_is_traced_consistently() {
        let e = MomentEngine::default();
        let word = w("X* X X* [t] X X X*");
        let base = e.trace_moment(&word).unwrap();
        for k in 1..word.letters().len() {
            assert_eq!(e.trace_moment(&word.rotate(k)).unwrap(), base, "rotation {k}");
        }
        assert_eq!(e.trace_moment(&word.adjoint()).unwrap(), base);
    }
}
