//! Binary floating-point complex numbers with counted operations.
//!
//! Products use three real multiplications, squares two real squarings and
//! one multiplication, cubes two squarings and two multiplications, so that
//! counted operations line up with the step costs of [`crate::addseq::CostModel`].

use std::fmt;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::addseq::CostModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub complex_mul: u64,
    pub complex_sqr: u64,
    pub complex_cube: u64,
    pub real_mul: u64,
    pub real_sqr: u64,
}

impl OpCounts {
    /// Cost in units of one real multiplication.
    pub fn modeled_cost(&self, model: CostModel) -> f64 {
        self.real_mul as f64 * model.mul + self.real_sqr as f64 * model.sqr
    }

    pub fn merge(&mut self, other: &OpCounts) {
        self.complex_mul += other.complex_mul;
        self.complex_sqr += other.complex_sqr;
        self.complex_cube += other.complex_cube;
        self.real_mul += other.real_mul;
        self.real_sqr += other.real_sqr;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArbComplex {
    pub re: Float,
    pub im: Float,
}

impl ArbComplex {
    pub fn zero(prec: u32) -> Self {
        ArbComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ArbComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        ArbComplex { re, im }
    }

    /// Parses decimal strings, rounding once to `prec` bits.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let p = |s: &str| {
            Float::parse(s.trim())
                .map(|v| Float::with_val(prec, v))
                .map_err(|e| Error::Invalid(format!("cannot parse `{s}` as a number: {e}")))
        };
        Ok(ArbComplex {
            re: p(re)?,
            im: p(im)?,
        })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ArbComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// `log2 |z|` in double precision; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let a = Float::with_val(64, self.re.hypot_ref(&self.im));
        a.log2().to_f64()
    }

    pub fn mul(&self, other: &ArbComplex, prec: u32, ops: &mut OpCounts) -> Self {
        ops.complex_mul += 1;
        ops.real_mul += 3;
        let xt = Float::with_val(prec, &self.re * &other.re);
        let yu = Float::with_val(prec, &self.im * &other.im);
        let s = Float::with_val(prec + 2, &self.re + &self.im);
        let t = Float::with_val(prec + 2, &other.re + &other.im);
        let k = Float::with_val(prec + 2, &s * &t);
        let im = Float::with_val(prec, &k - &xt) - &yu;
        let re = Float::with_val(prec, &xt - &yu);
        ArbComplex { re, im }
    }

    pub fn sqr(&self, prec: u32, ops: &mut OpCounts) -> Self {
        ops.complex_sqr += 1;
        ops.real_sqr += 2;
        ops.real_mul += 1;
        let x2 = Float::with_val(prec, self.re.square_ref());
        let y2 = Float::with_val(prec, self.im.square_ref());
        let xy = Float::with_val(prec, &self.re * &self.im);
        ArbComplex {
            re: x2 - y2,
            im: xy << 1u32,
        }
    }

    pub fn cube(&self, prec: u32, ops: &mut OpCounts) -> Self {
        ops.complex_cube += 1;
        ops.real_sqr += 2;
        ops.real_mul += 2;
        let x2 = Float::with_val(prec + 2, self.re.square_ref());
        let y2 = Float::with_val(prec + 2, self.im.square_ref());
        let a = Float::with_val(prec + 2, &x2 - &(Float::with_val(prec + 2, &y2 * 3u32)));
        let b = Float::with_val(prec + 2, &(Float::with_val(prec + 2, &x2 * 3u32)) - &y2);
        ArbComplex {
            re: Float::with_val(prec, &self.re * &a),
            im: Float::with_val(prec, &self.im * &b),
        }
    }

    pub fn add(&self, other: &ArbComplex, prec: u32) -> Self {
        ArbComplex {
            re: Float::with_val(prec, &self.re + &other.re),
            im: Float::with_val(prec, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &ArbComplex, prec: u32) -> Self {
        ArbComplex {
            re: Float::with_val(prec, &self.re - &other.re),
            im: Float::with_val(prec, &self.im - &other.im),
        }
    }

    /// `self += sign * other`, rounding to the precision of `self`.
    pub fn add_signed(&mut self, other: &ArbComplex, sign: i8) {
        if sign >= 0 {
            self.re += &other.re;
            self.im += &other.im;
        } else {
            self.re -= &other.re;
            self.im -= &other.im;
        }
    }

    /// `self += sign`.
    pub fn add_unit(&mut self, sign: i8) {
        self.re += sign as i32;
    }

    /// `2^k * self`, exact.
    pub fn mul_2exp(&self, k: i32) -> Self {
        ArbComplex {
            re: self.re.clone() << k,
            im: self.im.clone() << k,
        }
    }

    /// Uncounted product at `prec`, used for prefactors and oracles.
    pub fn mul_plain(&self, other: &ArbComplex, prec: u32) -> Self {
        self.mul(other, prec, &mut OpCounts::default())
    }

    /// `e^self`.
    pub fn exp(&self, prec: u32) -> Self {
        let wp = prec + 16;
        let r = Float::with_val(wp, self.re.exp_ref());
        let (s, c) = Float::with_val(wp, &self.im).sin_cos(Float::new(wp));
        ArbComplex {
            re: Float::with_val(prec, &r * &c),
            im: Float::with_val(prec, &r * &s),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self, prec: u32) -> Self {
        let wp = prec + 16;
        let a = Float::with_val(wp, self.re.hypot_ref(&self.im));
        let arg = Float::with_val(wp, self.im.atan2_ref(&self.re));
        ArbComplex {
            re: Float::with_val(prec, a.ln_ref()),
            im: Float::with_val(prec, arg),
        }
    }

    /// `self * x` for real `x`.
    pub fn scale(&self, x: &Float, prec: u32) -> Self {
        ArbComplex {
            re: Float::with_val(prec, &self.re * x),
            im: Float::with_val(prec, &self.im * x),
        }
    }

    /// `|self - other|` at 64 bits.
    pub fn dist(&self, other: &ArbComplex) -> Float {
        let prec = self.prec().max(other.prec()) + 8;
        let d = self.sub(other, prec);
        Float::with_val(64, d.re.hypot_ref(&d.im))
    }

    /// `log2 |self - other|`; `-inf` when equal.
    pub fn log2_dist(&self, other: &ArbComplex) -> f64 {
        let d = self.dist(other);
        if d.is_zero() {
            f64::NEG_INFINITY
        } else {
            d.log2().to_f64()
        }
    }

    /// Decimal strings with as many digits as the precision supports.
    pub fn to_decimal(&self) -> (String, String) {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        (
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits)),
        )
    }

    /// Exact hexadecimal mantissa-exponent strings.
    pub fn to_hex(&self) -> (String, String) {
        (
            self.re.to_string_radix(16, None),
            self.im.to_string_radix(16, None),
        )
    }
}

impl fmt::Display for ArbComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal();
        write!(f, "{re} + {im}i")
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> ArbComplex {
        ArbComplex::from_f64(re, im, 200)
    }

    #[test]
    fn products_match_schoolbook() {
        let mut ops = OpCounts::default();
        let a = z(0.3, -1.25);
        let b = z(-2.5, 0.75);
        let p = a.mul(&b, 200, &mut ops);
        let f = |v: f64| Float::with_val(200, v);
        assert_eq!(p.re, f(0.3) * f(-2.5) - f(-1.25) * f(0.75));
        assert_eq!(p.im, f(0.3) * f(0.75) + f(-1.25) * f(-2.5));
        let s = a.sqr(200, &mut ops);
        assert_eq!(s, a.mul_plain(&a, 200));
        let c = a.cube(200, &mut ops);
        assert!(c.log2_dist(&s.mul_plain(&a, 200)) < -190.0);
        assert_eq!(
            ops,
            OpCounts {
                complex_mul: 1,
                complex_sqr: 1,
                complex_cube: 1,
                real_mul: 6,
                real_sqr: 4
            }
        );
        assert!((ops.modeled_cost(CostModel::FFT) - (6.0 + 8.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn exp_and_log() {
        let g = z(-0.5, 2.0);
        let back = g.exp(200).ln(200);
        assert!(back.log2_dist(&g) < -190.0);
        let e = ArbComplex::from_floats(Float::new(200), pi(200)).exp(200);
        assert!(e.log2_dist(&z(-1.0, 0.0)) < -190.0);
    }

    #[test]
    fn parse_and_print() {
        let v = ArbComplex::parse("0.1", "-3", 128).unwrap();
        assert_eq!(v.prec(), 128);
        let (re, im) = v.to_decimal();
        assert!(re.starts_with("1.0000000000"));
        assert!(im.starts_with("-3.0000"));
        let (hre, _) = v.to_hex();
        let back = Float::with_val(128, Float::parse_radix(&hre, 16).unwrap());
        assert_eq!(back, v.re);
        assert!(ArbComplex::parse("x", "1", 64).is_err());
    }
}
