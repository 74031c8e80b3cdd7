//! Exact scalar helpers: rationals, complex rationals and `Z[1/m]` membership.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact complex rational `re + i*im`.
pub type Coeff = Complex<BigRational>;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn coeff(re: BigRational, im: BigRational) -> Coeff {
    Complex::new(re, im)
}

pub fn coeff_int(p: i64) -> Coeff {
    Complex::new(rat_int(p), BigRational::zero())
}

pub fn coeff_real(r: BigRational) -> Coeff {
    Complex::new(r, BigRational::zero())
}

pub fn coeff_is_zero(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected rational \"p/q\", got {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

pub fn format_coeff(c: &Coeff) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => format_rational(&c.re),
        (true, false) => format!("{}i", format_rational(&c.im)),
        (false, false) => format!("{}+{}i", format_rational(&c.re), format_rational(&c.im)),
    }
}

/// True when every prime factor of the reduced denominator of `q` divides `m`.
pub fn in_localized(q: &BigRational, m: u64) -> bool {
    let mut d = q.denom().abs();
    if d.is_one() {
        return true;
    }
    let m = BigInt::from(m);
    loop {
        let g = d.gcd(&m);
        if g.is_one() {
            return d.is_one();
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
        if d.is_one() {
            return true;
        }
    }
}

/// `base^exp` as an exact rational; negative exponents invert.
pub fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    num_traits::pow::Pow::pow(base, exp as i32)
}

/// Floor division toward negative infinity.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
