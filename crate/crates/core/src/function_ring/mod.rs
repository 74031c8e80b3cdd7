//! Piecewise-polynomial functions on the circle `T = [0, 1)`.
//!
//! Pieces are half-open intervals `[b_i, b_{i+1})` with `b_0 = 0`, and each
//! piece is a polynomial in the absolute variable `t`. The exact backend has
//! rational coefficients. The numeric backend carries, per piece, a finite sum
//! `sum_r p_r(t) e^{2 pi i r t}` with complex double coefficients and rational
//! frequencies `r`; it exists to follow the phases produced by the
//! off-diagonal transfer operators.

mod poly;

pub use poly::{CPoly, Poly};

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{format_rational, parse_rational, rat, rat_int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

/// `sum_r p_r(t) e^{2 pi i r t}`, sorted by frequency, no zero polynomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhasePiece(Vec<(BigRational, CPoly)>);

impl PhasePiece {
    pub fn new(terms: Vec<(BigRational, CPoly)>) -> Self {
        let mut sorted: Vec<(BigRational, CPoly)> = Vec::new();
        let mut terms = terms;
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        for (r, p) in terms {
            match sorted.last_mut() {
                Some((r0, p0)) if *r0 == r => *p0 = p0.add(&p),
                _ => sorted.push((r, p)),
            }
        }
        sorted.retain(|(_, p)| !p.is_zero());
        PhasePiece(sorted)
    }

    pub fn terms(&self) -> &[(BigRational, CPoly)] {
        &self.0
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.0
            .iter()
            .map(|(r, p)| p.eval(t) * Complex64::from_polar(1.0, std::f64::consts::TAU * r.to_f64().unwrap_or(0.0) * t))
            .sum()
    }

    fn add(&self, other: &PhasePiece) -> PhasePiece {
        PhasePiece::new(self.0.iter().chain(&other.0).cloned().collect())
    }

    fn mul(&self, other: &PhasePiece) -> PhasePiece {
        let mut out = Vec::new();
        for (r, p) in &self.0 {
            for (s, q) in &other.0 {
                out.push((r + s, p.mul(q)));
            }
        }
        PhasePiece::new(out)
    }

    fn scale(&self, c: Complex64) -> PhasePiece {
        PhasePiece::new(self.0.iter().map(|(r, p)| (r.clone(), p.scale(c))).collect())
    }

    fn conj(&self) -> PhasePiece {
        PhasePiece::new(self.0.iter().map(|(r, p)| (-r, p.conj())).collect())
    }

    /// `t -> piece(a t + c)`.
    fn compose_linear(&self, a: &BigRational, c: &BigRational) -> PhasePiece {
        let (af, cf) = (a.to_f64().unwrap_or(f64::NAN), c.to_f64().unwrap_or(f64::NAN));
        PhasePiece::new(
            self.0
                .iter()
                .map(|(r, p)| {
                    let shift = Complex64::from_polar(1.0, std::f64::consts::TAU * (r * c).to_f64().unwrap_or(0.0));
                    (r * a, p.compose_linear(af, cf).scale(shift))
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Exact(Poly),
    Numeric(PhasePiece),
}

impl Piece {
    fn backend(&self) -> Backend {
        match self {
            Piece::Exact(_) => Backend::Exact,
            Piece::Numeric(_) => Backend::Numeric,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Piece::Exact(p) => p.is_zero(),
            Piece::Numeric(p) => p.0.is_empty(),
        }
    }

    fn to_numeric(&self) -> PhasePiece {
        match self {
            Piece::Exact(p) => PhasePiece::new(vec![(BigRational::zero(), CPoly::new(p.to_complex()))]),
            Piece::Numeric(p) => p.clone(),
        }
    }

    fn add(&self, other: &Piece) -> Piece {
        match (self, other) {
            (Piece::Exact(a), Piece::Exact(b)) => Piece::Exact(a.add(b)),
            _ => Piece::Numeric(self.to_numeric().add(&other.to_numeric())),
        }
    }

    fn mul(&self, other: &Piece) -> Piece {
        match (self, other) {
            (Piece::Exact(a), Piece::Exact(b)) => Piece::Exact(a.mul(b)),
            _ => Piece::Numeric(self.to_numeric().mul(&other.to_numeric())),
        }
    }

    fn compose_linear(&self, a: &BigRational, c: &BigRational) -> Piece {
        match self {
            Piece::Exact(p) => Piece::Exact(p.compose_linear(a, c)),
            Piece::Numeric(p) => Piece::Numeric(p.compose_linear(a, c)),
        }
    }

    fn eval_f64(&self, t: f64) -> Complex64 {
        match self {
            Piece::Exact(p) => Complex64::new(p.eval_f64(t), 0.0),
            Piece::Numeric(p) => p.eval(t),
        }
    }
}

/// A function on `[0, 1)` given by one piece per half-open interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseFunction {
    breakpoints: Vec<BigRational>,
    pieces: Vec<Piece>,
}

impl PiecewiseFunction {
    /// Validates and normalizes. `breakpoints` must start at 0, increase
    /// strictly and stay below 1; all pieces share one backend.
    pub fn from_pieces(breakpoints: Vec<BigRational>, pieces: Vec<Piece>) -> Result<Self> {
        if breakpoints.is_empty() || !breakpoints[0].is_zero() {
            return Err(Error::InvalidInput("breakpoints must start at 0".into()));
        }
        if breakpoints.len() != pieces.len() {
            return Err(Error::InvalidInput("one piece per breakpoint required".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) || breakpoints.last().is_some_and(|b| *b >= BigRational::one()) {
            return Err(Error::InvalidInput("breakpoints must increase strictly inside [0, 1)".into()));
        }
        let backend = pieces[0].backend();
        if pieces.iter().any(|p| p.backend() != backend) {
            return Err(Error::BackendMismatch("pieces mix exact and numeric backends".into()));
        }
        Ok(PiecewiseFunction { breakpoints, pieces }.normalized())
    }

    /// Convenience for exact data: `(start, coefficients)` per piece.
    pub fn exact(pieces: Vec<(BigRational, Vec<BigRational>)>) -> Result<Self> {
        let (b, p): (Vec<_>, Vec<_>) = pieces.into_iter().map(|(b, c)| (b, Piece::Exact(Poly::new(c)))).unzip();
        Self::from_pieces(b, p)
    }

    pub fn constant(c: BigRational) -> Self {
        PiecewiseFunction { breakpoints: vec![BigRational::zero()], pieces: vec![Piece::Exact(Poly::constant(c))] }
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// `f(t) = t`.
    pub fn identity() -> Self {
        PiecewiseFunction {
            breakpoints: vec![BigRational::zero()],
            pieces: vec![Piece::Exact(Poly::linear(BigRational::one(), BigRational::zero()))],
        }
    }

    /// `χ_[a, b)` for `0 <= a < b <= 1`.
    pub fn indicator(a: BigRational, b: BigRational) -> Result<Self> {
        if a.is_negative() || a >= b || b > BigRational::one() {
            return Err(Error::InvalidInput(format!("bad interval [{a}, {b})")));
        }
        let mut bps = vec![(BigRational::zero(), vec![])];
        if a.is_zero() {
            bps[0].1 = vec![BigRational::one()];
        } else {
            bps.push((a, vec![BigRational::one()]));
        }
        if b < BigRational::one() {
            bps.push((b, vec![]));
        }
        Self::exact(bps)
    }

    /// `e^{2 pi i r t}` on the numeric backend.
    pub fn phase(r: BigRational) -> Self {
        PiecewiseFunction {
            breakpoints: vec![BigRational::zero()],
            pieces: vec![Piece::Numeric(PhasePiece::new(vec![(r, CPoly::new(vec![Complex64::new(1.0, 0.0)]))]))],
        }
    }

    pub fn backend(&self) -> Backend {
        self.pieces[0].backend()
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `[b_i, b_{i+1})` for piece `i`.
    pub fn interval(&self, i: usize) -> (BigRational, BigRational) {
        let hi = self.breakpoints.get(i + 1).cloned().unwrap_or_else(BigRational::one);
        (self.breakpoints[i].clone(), hi)
    }

    pub fn exact_pieces(&self) -> Result<Vec<&Poly>> {
        self.pieces
            .iter()
            .map(|p| match p {
                Piece::Exact(q) => Ok(q),
                Piece::Numeric(_) => Err(Error::BackendMismatch("exact backend required".into())),
            })
            .collect()
    }

    pub fn to_numeric(&self) -> Self {
        PiecewiseFunction {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| Piece::Numeric(p.to_numeric())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Piece::is_zero)
    }

    fn piece_index(&self, t: &BigRational) -> usize {
        self.breakpoints.partition_point(|b| b <= t) - 1
    }

    fn normalized(mut self) -> Self {
        let mut b = Vec::with_capacity(self.breakpoints.len());
        let mut p: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for (bi, pi) in self.breakpoints.drain(..).zip(self.pieces.drain(..)) {
            if p.last() == Some(&pi) {
                continue;
            }
            b.push(bi);
            p.push(pi);
        }
        PiecewiseFunction { breakpoints: b, pieces: p }
    }

    fn check_same_backend(&self, other: &Self) -> Result<()> {
        if self.backend() != other.backend() {
            return Err(Error::BackendMismatch(format!("{:?} against {:?}", self.backend(), other.backend())));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, op: impl Fn(&Piece, &Piece) -> Piece) -> Self {
        let mut bps: Vec<BigRational> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        bps.sort();
        bps.dedup();
        let pieces = bps
            .iter()
            .map(|b| op(&self.pieces[self.piece_index(b)], &other.pieces[other.piece_index(b)]))
            .collect();
        PiecewiseFunction { breakpoints: bps, pieces }.normalized()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_backend(other)?;
        Ok(self.combine(other, Piece::add))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_backend(other)?;
        Ok(self.combine(other, Piece::mul))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Exact(q) => Piece::Exact(q.scale(c)),
                Piece::Numeric(q) => Piece::Numeric(q.scale(Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))),
            })
            .collect();
        PiecewiseFunction { breakpoints: self.breakpoints.clone(), pieces }.normalized()
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        let pieces = self.pieces.iter().map(|p| Piece::Numeric(p.to_numeric().scale(c))).collect();
        PiecewiseFunction { breakpoints: self.breakpoints.clone(), pieces }.normalized()
    }

    /// Pointwise complex conjugate; the identity on the exact backend.
    pub fn conj(&self) -> Self {
        match self.backend() {
            Backend::Exact => self.clone(),
            Backend::Numeric => PiecewiseFunction {
                breakpoints: self.breakpoints.clone(),
                pieces: self.pieces.iter().map(|p| Piece::Numeric(p.to_numeric().conj())).collect(),
            },
        }
    }

    /// `t -> f(d t mod 1)`.
    pub fn dilate(&self, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        let dr = rat_int(d as i64);
        let mut bps = Vec::new();
        let mut pieces = Vec::new();
        for j in 0..d as i64 {
            for (b, p) in self.breakpoints.iter().zip(&self.pieces) {
                bps.push((rat_int(j) + b) / &dr);
                pieces.push(p.compose_linear(&dr, &rat_int(-j)));
            }
        }
        Ok(PiecewiseFunction { breakpoints: bps, pieces }.normalized())
    }

    /// `t -> f(a t + c)` for an affine map sending `[0, 1)` into `[0, 1)`.
    fn pullback(&self, a: &BigRational, c: &BigRational) -> Self {
        let hi = a + c;
        let mut bps = vec![BigRational::zero()];
        for b in &self.breakpoints {
            if b > c && *b < hi {
                bps.push((b - c) / a);
            }
        }
        let pieces = bps
            .iter()
            .map(|s| self.pieces[self.piece_index(&(a * s + c))].compose_linear(a, c))
            .collect();
        PiecewiseFunction { breakpoints: bps, pieces }.normalized()
    }

    /// `L f (t) = (f(t/2) + f((t+1)/2)) / 2`.
    pub fn transfer(&self) -> Self {
        let half = rat(1, 2);
        let lo = self.pullback(&half, &BigRational::zero());
        let hi = self.pullback(&half, &half);
        lo.combine(&hi, Piece::add).scale(&half)
    }

    /// `L_ij h (s) = e^{pi i (j - i) s} (h(s/2) + (-1)^{j-i} h((s+1)/2)) / 2`,
    /// the function with `S_i^* h S_j = L_ij(h)` in `O_(1,2)(T)`. Off the
    /// diagonal the result carries a phase, so the numeric backend is used.
    pub fn transfer_ij(&self, i: u32, j: u32) -> Result<Self> {
        if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
            return Err(Error::InvalidInput(format!("letters ({i}, {j}) outside 1..=2")));
        }
        if i == j {
            return Ok(self.transfer());
        }
        let half = rat(1, 2);
        let sign = if (j as i64 - i as i64).is_odd() { -1 } else { 1 };
        let lo = self.pullback(&half, &BigRational::zero());
        let hi = self.pullback(&half, &half).scale(&rat_int(sign));
        let sum = lo.combine(&hi, Piece::add).scale(&half).to_numeric();
        let phase = Self::phase(rat(j as i64 - i as i64, 2));
        sum.mul(&phase)
    }

    pub fn integrate(&self) -> Result<BigRational> {
        let polys = self.exact_pieces()?;
        Ok(polys
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let (lo, hi) = self.interval(i);
                p.integrate(&lo, &hi)
            })
            .sum())
    }

    /// Winding number of `t -> exp(2 pi i f(t))`: the sum of net changes over
    /// pieces. Every jump, including the wrap from `1` to `0`, must be an
    /// integer for the loop to be continuous.
    pub fn winding(&self) -> Result<BigInt> {
        let polys = self.exact_pieces()?;
        let k = polys.len();
        let mut total = BigRational::zero();
        for i in 0..k {
            let (lo, hi) = self.interval(i);
            let right = polys[i].eval(&hi);
            total += &right - polys[i].eval(&lo);
            let next_start = if i + 1 < k { polys[i + 1].eval(&hi) } else { polys[0].eval(&BigRational::zero()) };
            let jump = &next_start - &right;
            if !jump.is_integer() {
                return Err(Error::Discontinuous(format!(
                    "jump of {} at t = {}",
                    format_rational(&jump),
                    format_rational(if i + 1 < k { &hi } else { &self.breakpoints[0] })
                )));
            }
        }
        if !total.is_integer() {
            return Err(Error::Discontinuous(format!("total change {} is not an integer", format_rational(&total))));
        }
        Ok(total.to_integer())
    }

    /// Closures of the intervals where a piece is not identically zero,
    /// merged when adjacent.
    pub fn support(&self) -> Vec<(BigRational, BigRational)> {
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let (lo, hi) = self.interval(i);
            match out.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    pub fn eval_exact(&self, t: &BigRational) -> Result<BigRational> {
        let t = t - t.floor();
        match &self.pieces[self.piece_index(&t)] {
            Piece::Exact(p) => Ok(p.eval(&t)),
            Piece::Numeric(_) => Err(Error::BackendMismatch("exact evaluation of a numeric function".into())),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let t = t - t.floor();
        let idx = self.breakpoints.partition_point(|b| b.to_f64().unwrap_or(0.0) <= t).max(1) - 1;
        self.pieces[idx].eval_f64(t)
    }

    /// Largest `|f(t) - g(t)|` over `t = j / grid`.
    pub fn max_abs_diff_sampled(&self, other: &Self, grid: usize) -> f64 {
        (0..grid)
            .map(|j| {
                let t = j as f64 / grid as f64;
                (self.eval(t) - other.eval(t)).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let breakpoints: Vec<String> = self.breakpoints.iter().map(format_rational).collect();
        let pieces: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Exact(q) => serde_json::json!(q.coeffs().iter().map(format_rational).collect::<Vec<_>>()),
                Piece::Numeric(q) => serde_json::json!(q
                    .terms()
                    .iter()
                    .map(|(r, c)| serde_json::json!({
                        "freq": format_rational(r),
                        "coeffs": c.0.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>()),
            })
            .collect();
        serde_json::json!({ "breakpoints": breakpoints, "pieces": pieces, "backend": self.backend() })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            breakpoints: Vec<String>,
            pieces: Vec<serde_json::Value>,
            backend: Backend,
        }
        #[derive(Deserialize)]
        struct RawTerm {
            freq: String,
            coeffs: Vec<[f64; 2]>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        let bps = raw.breakpoints.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let pieces = raw
            .pieces
            .into_iter()
            .map(|p| -> Result<Piece> {
                match raw.backend {
                    Backend::Exact => {
                        let cs: Vec<String> = serde_json::from_value(p)?;
                        Ok(Piece::Exact(Poly::new(cs.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)))
                    }
                    Backend::Numeric => {
                        let ts: Vec<RawTerm> = serde_json::from_value(p)?;
                        let terms = ts
                            .into_iter()
                            .map(|t| {
                                let c = CPoly::new(t.coeffs.iter().map(|z| Complex64::new(z[0], z[1])).collect());
                                Ok((parse_rational(&t.freq)?, c))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Piece::Numeric(PhasePiece::new(terms)))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pieces(bps, pieces)
    }
}

impl fmt::Display for PiecewiseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.interval(i);
            match p {
                Piece::Exact(q) => writeln!(f, "[{lo}, {hi}): {q}")?,
                Piece::Numeric(q) => writeln!(f, "[{lo}, {hi}): {} phase terms", q.terms().len())?,
            }
        }
        Ok(())
    }
}
