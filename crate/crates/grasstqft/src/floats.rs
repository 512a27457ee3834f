//! High-precision floating-point backend.
//!
//! This backend exists only for numeric cross-checks of the exact cyclotomic
//! path: the exact backend is authoritative, and disagreement beyond tolerance
//! is a hard failure, never a tie-break. Every approximate value carries the
//! mantissa precision it was computed at (64 bits minimum).

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

/// A binary floating-point value tagged with its mantissa precision.
#[derive(Clone, Debug)]
pub struct FloatApprox {
    pub value: BigFloat,
    pub precision: usize,
}

impl FloatApprox {
    pub fn to_decimal_string(&self, ctx: &mut FloatCtx) -> String {
        self.value
            .format(Radix::Dec, RM, &mut ctx.consts)
            .unwrap_or_else(|_| "nan".to_string())
    }
}

/// Precision plus the shared constants cache (π) used by all float evaluation.
pub struct FloatCtx {
    pub precision: usize,
    consts: Consts,
}

impl FloatCtx {
    pub fn new(precision: usize) -> Result<FloatCtx> {
        if precision < MIN_PRECISION {
            return Err(Error::PrecisionTooLow(precision));
        }
        let consts = Consts::new().map_err(|_| Error::NonFinite)?;
        Ok(FloatCtx { precision, consts })
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i8(0, self.precision)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.precision)
    }

    pub fn from_bigint(&mut self, v: &BigInt) -> BigFloat {
        let digits = format!("{:b}", v);
        BigFloat::parse(&digits, Radix::Bin, self.precision, RM, &mut self.consts)
    }

    pub fn from_rational(&mut self, v: &Rational) -> BigFloat {
        let num = self.from_bigint(v.numer());
        let den = self.from_bigint(v.denom());
        num.div(&den, self.precision, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.precision, RM)
    }

    /// 2 sin(π m / n) with the angle normalized into (0, π); errors on the
    /// zero angle exactly like the cyclotomic constructor.
    pub fn two_sin(&mut self, m: i64, n: u64) -> Result<BigFloat> {
        let m0 = m.rem_euclid(n as i64);
        if m0 == 0 {
            return Err(Error::SineZero { m, n });
        }
        let p = self.precision;
        let theta = self
            .pi()
            .mul(&self.from_i64(m0), p, RM)
            .div(&self.from_i64(n as i64), p, RM);
        let s = theta.sin(p, RM, &mut self.consts);
        Ok(s.mul(&self.from_i64(2), p, RM))
    }

    /// exp(2πi e / m) as a complex float.
    pub fn root_of_unity(&mut self, m: u64, e: i64) -> CFloat {
        let p = self.precision;
        let e = e.rem_euclid(m as i64);
        let theta = self
            .pi()
            .mul(&self.from_i64(2 * e), p, RM)
            .div(&self.from_i64(m as i64), p, RM);
        CFloat {
            re: theta.cos(p, RM, &mut self.consts),
            im: theta.sin(p, RM, &mut self.consts),
        }
    }

    /// Numeric evaluation of a cyclotomic element at ζ_M = exp(2πi/M).
    pub fn eval_cyclotomic(&mut self, z: &Cyclotomic) -> CFloat {
        let p = self.precision;
        let order = z.order();
        let mut acc = CFloat::zero(self);
        for (j, c) in z.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.root_of_unity(order, j as i64);
            let cf = self.from_rational(c);
            acc = acc.add(&w.scale(&cf, p), p);
        }
        acc
    }
}

/// Complex number over `BigFloat`.
#[derive(Clone, Debug)]
pub struct CFloat {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CFloat {
    pub fn zero(ctx: &FloatCtx) -> CFloat {
        CFloat {
            re: ctx.zero(),
            im: ctx.zero(),
        }
    }

    pub fn one(ctx: &FloatCtx) -> CFloat {
        CFloat {
            re: ctx.from_i64(1),
            im: ctx.zero(),
        }
    }

    pub fn real(v: BigFloat, ctx: &FloatCtx) -> CFloat {
        CFloat {
            re: v,
            im: ctx.zero(),
        }
    }

    pub fn add(&self, rhs: &CFloat, p: usize) -> CFloat {
        CFloat {
            re: self.re.add(&rhs.re, p, RM),
            im: self.im.add(&rhs.im, p, RM),
        }
    }

    pub fn sub(&self, rhs: &CFloat, p: usize) -> CFloat {
        CFloat {
            re: self.re.sub(&rhs.re, p, RM),
            im: self.im.sub(&rhs.im, p, RM),
        }
    }

    pub fn mul(&self, rhs: &CFloat, p: usize) -> CFloat {
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        CFloat {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
        }
    }

    pub fn div(&self, rhs: &CFloat, p: usize) -> CFloat {
        let c2 = rhs.re.mul(&rhs.re, p, RM);
        let d2 = rhs.im.mul(&rhs.im, p, RM);
        let den = c2.add(&d2, p, RM);
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        CFloat {
            re: ac.add(&bd, p, RM).div(&den, p, RM),
            im: bc.sub(&ad, p, RM).div(&den, p, RM),
        }
    }

    pub fn scale(&self, f: &BigFloat, p: usize) -> CFloat {
        CFloat {
            re: self.re.mul(f, p, RM),
            im: self.im.mul(f, p, RM),
        }
    }

    pub fn neg(&self) -> CFloat {
        CFloat {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// z^e with signed exponent; negative exponents invert.
    pub fn powi(&self, e: i64, ctx: &FloatCtx) -> CFloat {
        let p = ctx.precision;
        if e < 0 {
            return CFloat::one(ctx).div(self, p).powi(-e, ctx);
        }
        let mut result = CFloat::one(ctx);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        result
    }
}

impl Cyclotomic {
    /// Numeric evaluation at ζ_M = exp(2πi/M): the real part and the
    /// imaginary magnitude, both at the requested precision.
    pub fn approx(&self, precision: usize) -> Result<(FloatApprox, FloatApprox)> {
        let mut ctx = FloatCtx::new(precision)?;
        let v = ctx.eval_cyclotomic(self);
        Ok((
            FloatApprox {
                value: v.re,
                precision,
            },
            FloatApprox {
                value: v.im.abs(),
                precision,
            },
        ))
    }
}

/// Exact power of two, for tolerance thresholds.
pub fn pow2(exp: i32, precision: usize) -> BigFloat {
    BigFloat::from_f64(2f64.powi(exp), precision)
}

/// Round a finite float to the nearest integer, exactly.
pub fn round_to_bigint(x: &BigFloat) -> Result<BigInt> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::NonFinite);
    }
    if x.is_zero() {
        return Ok(BigInt::zero());
    }
    let (words, _n, sign, exponent, _inexact) = x.as_raw_parts().ok_or(Error::NonFinite)?;
    let mut mantissa = BigInt::zero();
    for w in words.iter().rev() {
        mantissa = (mantissa << 64) + BigInt::from(*w);
    }
    let total_bits = words.len() as i64 * 64;
    let shift = total_bits - exponent as i64;
    let magnitude = if shift <= 0 {
        mantissa << ((-shift) as usize)
    } else {
        // Nearest integer: floor(2v) then round half away from zero.
        let doubled = mantissa >> ((shift - 1) as usize);
        (doubled + 1) >> 1
    };
    Ok(match sign {
        Sign::Neg => -magnitude,
        Sign::Pos => magnitude,
    })
}

/// |x - y| < 2^exp at the given working precision.
pub fn within_pow2(x: &BigFloat, y: &BigFloat, exp: i32, precision: usize) -> bool {
    let diff = x.sub(y, precision, RM).abs();
    diff < pow2(exp, precision)
}
