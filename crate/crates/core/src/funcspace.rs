//! Exact piecewise polynomials on `[0,1]` with rational breakpoints and
//! coefficients, and the trace `τ(f) = ∫₀¹ f`.
//!
//! Piece `i` of a [`PiecewisePoly`] lives on the half-open interval
//! `(x_{i-1}, x_i]`; the point `0` is evaluated by the first piece.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{fmt_rational, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuncError {
    #[error("argument {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(String),
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error("invalid breakpoints: {0}")]
    Breakpoints(String),
    #[error("malformed serialized function: {0}")]
    Serialized(String),
}

/// Dense univariate polynomial in `t` with rational coefficients,
/// lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The identity function `t`.
    pub fn t() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer((k as i64 + 1).into()));
        }
        Poly::new(coeffs)
    }

    /// `∫_a^b p(t) dt`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = o.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// The unique polynomial of degree `< points.len()` through `points`
/// (Newton divided differences, exact).
pub fn interpolate(points: &[(Rational, Rational)]) -> Result<Poly, FuncError> {
    if points.is_empty() {
        return Err(FuncError::NoPoints);
    }
    for (i, (a, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(b, _)| b == a) {
            return Err(FuncError::DuplicateAbscissa(fmt_rational(a)));
        }
    }
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner over the Newton basis
    let mut acc = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = Poly::new(vec![-xs[i].clone(), Rational::one()]);
        acc = &(&acc * &factor) + &Poly::constant(dd[i].clone());
    }
    Ok(acc)
}

/// Element of C[0,1] restricted to piecewise polynomials with rational data.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    /// Builds and canonicalizes. Breakpoints must run strictly upward from
    /// `0` to `1`, with one piece per interval.
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self, FuncError> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(FuncError::Breakpoints(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return Err(FuncError::Breakpoints("must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FuncError::Breakpoints("must be strictly increasing".into()));
        }
        Ok(Self::canonical(breakpoints, pieces))
    }

    fn canonical(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Self {
        let mut bps = vec![breakpoints[0].clone()];
        let mut out: Vec<Poly> = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.into_iter().enumerate() {
            if out.last() == Some(&p) {
                *bps.last_mut().unwrap() = breakpoints[i + 1].clone();
            } else {
                out.push(p);
                bps.push(breakpoints[i + 1].clone());
            }
        }
        PiecewisePoly {
            breakpoints: bps,
            pieces: out,
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        PiecewisePoly {
            breakpoints: vec![Rational::zero(), Rational::one()],
            pieces: vec![p],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The identity function `t`.
    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// `(left, right, poly)` triples, one per piece.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational, &Poly)> {
        self.pieces
            .iter()
            .enumerate()
            .map(move |(i, p)| (&self.breakpoints[i], &self.breakpoints[i + 1], p))
    }

    pub fn is_single_piece(&self) -> bool {
        self.pieces.len() == 1
    }

    /// The value if this is a single constant piece.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.pieces.len() == 1 {
            self.pieces[0].as_constant()
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Largest degree over all pieces.
    pub fn degree(&self) -> usize {
        self.pieces.iter().map(Poly::degree).max().unwrap_or(0)
    }

    fn piece_index(&self, t: &Rational) -> usize {
        if t.is_zero() {
            return 0;
        }
        self.breakpoints[1..]
            .iter()
            .position(|x| t <= x)
            .unwrap_or(self.pieces.len() - 1)
    }

    /// Exact value at `t ∈ [0,1]`.
    pub fn eval_at(&self, t: &Rational) -> Result<Rational, FuncError> {
        if t.is_negative() || *t > Rational::one() {
            return Err(FuncError::OutOfRange(fmt_rational(t)));
        }
        Ok(self.pieces[self.piece_index(t)].eval(t))
    }

    /// The trace `τ(f) = ∫₀¹ f(t) dt`.
    pub fn tau(&self) -> Rational {
        self.intervals()
            .map(|(a, b, p)| p.integral(a, b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let pieces = self.pieces.iter().map(|p| p.scale(c)).collect();
        Self::canonical(self.breakpoints.clone(), pieces)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        if self.breakpoints == other.breakpoints {
            let pieces = self
                .pieces
                .iter()
                .zip(&other.pieces)
                .map(|(a, b)| op(a, b))
                .collect();
            return Self::canonical(self.breakpoints.clone(), pieces);
        }
        let mut bps: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        bps.sort();
        bps.dedup();
        let two = Rational::from_integer(2.into());
        let pieces = bps
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                op(
                    &self.pieces[self.piece_index(&mid)],
                    &other.pieces[other.piece_index(&mid)],
                )
            })
            .collect();
        Self::canonical(bps, pieces)
    }

    /// Product of a list; the empty product is `1`.
    pub fn product<'a>(items: impl IntoIterator<Item = &'a PiecewisePoly>) -> PiecewisePoly {
        let mut acc = PiecewisePoly::one();
        for f in items {
            acc = &acc * f;
        }
        acc
    }

    /// Restriction of the piece structure to `[a, b]`: the polynomial
    /// pieces meeting that interval together with their clipped bounds.
    pub fn pieces_on(&self, a: &Rational, b: &Rational) -> Vec<(Rational, Rational, Poly)> {
        self.intervals()
            .filter(|(l, r, _)| *r > a && *l < b)
            .map(|(l, r, p)| (l.max(a).clone(), r.min(b).clone(), p.clone()))
            .collect()
    }

    pub fn to_json(&self) -> PiecewiseJson {
        PiecewiseJson {
            breakpoints: self.breakpoints.iter().map(fmt_rational).collect(),
            coeffs: self
                .pieces
                .iter()
                .map(|p| p.coeffs().iter().map(fmt_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &PiecewiseJson) -> Result<Self, FuncError> {
        let parse = |s: &String| {
            parse_rational(s).ok_or_else(|| FuncError::Serialized(format!("bad rational {s:?}")))
        };
        let bps = j.breakpoints.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let pieces = j
            .coeffs
            .iter()
            .map(|cs| cs.iter().map(parse).collect::<Result<Vec<_>, _>>().map(Poly::new))
            .collect::<Result<Vec<_>, _>>()?;
        let f = PiecewisePoly::new(bps, pieces)?;
        if f.to_json() != *j {
            return Err(FuncError::Serialized("not in canonical form".into()));
        }
        Ok(f)
    }
}

/// JSON form: `{breakpoints: ["0","1/2","1"], coeffs: [["1"],["0","1"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseJson {
    pub breakpoints: Vec<String>,
    pub coeffs: Vec<Vec<String>>,
}

impl Add for &PiecewisePoly {
    type Output = PiecewisePoly;
    fn add(self, o: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(o, |a, b| a + b)
    }
}

impl Sub for &PiecewisePoly {
    type Output = PiecewisePoly;
    fn sub(self, o: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(o, |a, b| a - b)
    }
}

impl Mul for &PiecewisePoly {
    type Output = PiecewisePoly;
    fn mul(self, o: &PiecewisePoly) -> PiecewisePoly {
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        self.zip_with(o, |a, b| a * b)
    }
}

impl Neg for &PiecewisePoly {
    type Output = PiecewisePoly;
    fn neg(self) -> PiecewisePoly {
        self.scale(&-Rational::one())
    }
}

impl From<Poly> for PiecewisePoly {
    fn from(p: Poly) -> Self {
        PiecewisePoly::from_poly(p)
    }
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.len() == 1 {
            return write!(f, "{}", self.pieces[0]);
        }
        write!(f, "piecewise{{ ")?;
        for (i, (a, b, p)) in self.intervals().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let open = if i == 0 { '[' } else { '(' };
            write!(f, "{open}{},{}]: {p}", fmt_rational(a), fmt_rational(b))?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn poly(cs: &[(i64, i64)]) -> Poly {
        Poly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn step(at: Rational, left: i64, right: i64) -> PiecewisePoly {
        PiecewisePoly::new(
            vec![int(0), at, int(1)],
            vec![Poly::constant(int(left)), Poly::constant(int(right))],
        )
        .unwrap()
    }

    #[test]
    fn mul_t_one_minus_t() {
        let t = PiecewisePoly::t();
        let one_minus_t = PiecewisePoly::from_poly(poly(&[(1, 1), (-1, 1)]));
        assert_eq!(&t * &one_minus_t, PiecewisePoly::from_poly(poly(&[(0, 1), (1, 1), (-1, 1)])));
    }

    #[test]
    fn add_zero_identity() {
        let f = PiecewisePoly::from_poly(poly(&[(1, 2), (3, 4)]));
        assert_eq!(&f + &PiecewisePoly::zero(), f);
    }

    #[test]
    fn indicator_intersection() {
        let a = step(q(1, 2), 1, 0);
        let b = step(q(1, 3), 0, 1);
        let prod = &a * &b;
        assert_eq!(prod.breakpoints(), &[int(0), q(1, 3), q(1, 2), int(1)]);
        assert_eq!(prod.eval_at(&q(2, 5)).unwrap(), int(1));
        assert_eq!(prod.eval_at(&q(1, 4)).unwrap(), int(0));
        assert_eq!(prod.eval_at(&q(3, 4)).unwrap(), int(0));
        assert_eq!(prod.tau(), q(1, 6));
    }

    #[test]
    fn tau_values() {
        assert_eq!(PiecewisePoly::one().tau(), int(1));
        let f = PiecewisePoly::from_poly(poly(&[(0, 1), (1, 1), (-1, 1)]));
        assert_eq!(f.tau(), q(1, 6));
        // (2/3)·τ((b − 44/3)²) for b = 29/2 + t − t²
        let b = PiecewisePoly::from_poly(poly(&[(29, 2), (1, 1), (-1, 1)]));
        let c = &b - &PiecewisePoly::constant(q(44, 3));
        assert_eq!((&c * &c).tau() * q(2, 3), q(1, 270));
    }

    #[test]
    fn eval_values() {
        let f = PiecewisePoly::from_poly(poly(&[(1, 2), (1, 1), (-1, 1)]));
        assert_eq!(f.eval_at(&q(1, 2)).unwrap(), q(3, 4));
        let c = PiecewisePoly::constant(q(-7, 3));
        assert_eq!(c.eval_at(&q(5, 9)).unwrap(), q(-7, 3));
        let b = PiecewisePoly::from_poly(poly(&[(29, 2), (1, 1), (-1, 1)]));
        assert_eq!(b.eval_at(&int(0)).unwrap(), q(29, 2));
        assert!(b.eval_at(&q(3, 2)).is_err());
        assert!(b.eval_at(&q(-1, 2)).is_err());
    }

    #[test]
    fn half_open_convention() {
        let f = step(q(1, 2), 1, 0);
        assert_eq!(f.eval_at(&q(1, 2)).unwrap(), int(1));
        assert_eq!(f.eval_at(&int(0)).unwrap(), int(1));
        assert_eq!(f.eval_at(&int(1)).unwrap(), int(0));
    }

    #[test]
    fn canonical_merge() {
        let f = PiecewisePoly::new(
            vec![int(0), q(1, 3), int(1)],
            vec![Poly::t(), Poly::t()],
        )
        .unwrap();
        assert_eq!(f, PiecewisePoly::t());
        assert!(PiecewisePoly::new(vec![int(0), q(1, 2), q(1, 2), int(1)], vec![Poly::one(); 3]).is_err());
        assert!(PiecewisePoly::new(vec![q(1, 2), int(1)], vec![Poly::one()]).is_err());
    }

    #[test]
    fn interpolate_examples() {
        // samples of 1/2 + t - t^2 at 0, 1/4, 1/2
        let f = poly(&[(1, 2), (1, 1), (-1, 1)]);
        let pts: Vec<_> = [int(0), q(1, 4), q(1, 2)].into_iter().map(|t| (t.clone(), f.eval(&t))).collect();
        assert_eq!(interpolate(&pts).unwrap(), f);
        assert_eq!(interpolate(&[(int(0), q(5, 3))]).unwrap(), Poly::constant(q(5, 3)));
        let line = interpolate(&[(q(1, 3), int(1)), (q(2, 3), int(2))]).unwrap();
        assert_eq!(line, poly(&[(0, 1), (3, 1)]));
        assert!(matches!(
            interpolate(&[(int(0), int(1)), (int(0), int(2))]),
            Err(FuncError::DuplicateAbscissa(_))
        ));
        assert!(interpolate(&[]).is_err());
    }

    #[test]
    fn display_grammar() {
        assert_eq!(poly(&[(29, 2), (1, 1), (-1, 1)]).to_string(), "29/2 + t - t^2");
        assert_eq!(poly(&[(0, 1), (0, 1), (-3, 2)]).to_string(), "-3/2*t^2");
        let f = step(q(1, 2), 1, 0);
        assert_eq!(f.to_string(), "piecewise{ [0,1/2]: 1; (1/2,1]: 0 }");
    }

    #[test]
    fn json_roundtrip() {
        let f = step(q(1, 2), 1, 0);
        let j = f.to_json();
        assert_eq!(j.breakpoints, vec!["0", "1/2", "1"]);
        assert_eq!(PiecewisePoly::from_json(&j).unwrap(), f);
        let mut bad = j.clone();
        bad.coeffs[1] = vec!["1".into()];
        assert!(PiecewisePoly::from_json(&bad).is_err());
    }
}
