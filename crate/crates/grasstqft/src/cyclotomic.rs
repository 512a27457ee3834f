//! Exact arithmetic in cyclotomic fields Q(ζ_M).
//!
//! Elements are stored in the canonical power basis 1, ζ, ..., ζ^{φ(M)−1}
//! modulo the M-th cyclotomic polynomial Φ_M, so two equal field elements have
//! identical coefficient vectors and equality is plain coefficient equality.
//! Every root of unity, sine value and phase used by the intersection formulas
//! lives here; nothing in the authoritative computation path ever leaves exact
//! arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

type IntPoly = Vec<BigInt>;

/// Euler's totient.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(m: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            ds.push(d);
            if d != m / d {
                ds.push(m / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

/// The M-th cyclotomic polynomial Φ_M as a dense little-endian integer
/// coefficient vector, computed by dividing x^M − 1 by the product of all
/// Φ_d with d | M, d < M.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    cyclo_poly_cached(m).as_ref().clone()
}

static CYCLO_CACHE: OnceLock<RwLock<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();

fn cyclo_poly_cached(m: u64) -> Arc<IntPoly> {
    let cache = CYCLO_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&m) {
        return p.clone();
    }
    let poly = Arc::new(compute_cyclo_poly(m));
    let mut guard = cache.write().unwrap();
    // Idempotent fill: a concurrent initializer computed the same canonical value.
    guard.entry(m).or_insert(poly).clone()
}

fn compute_cyclo_poly(m: u64) -> IntPoly {
    if m == 1 {
        return vec![BigInt::from(-1), BigInt::one()];
    }
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    let mut poly = num;
    for d in divisors(m) {
        if d < m {
            let phi_d = cyclo_poly_cached(d);
            poly = int_poly_div_exact(&poly, &phi_d);
        }
    }
    poly
}

fn int_poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.clone();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "inexact cyclotomic division"
    );
    quot
}

/// Precomputed data for one field order: Φ_M and the reduction of every
/// monomial ζ^j, 0 ≤ j < M, to the canonical basis.
struct OrderData {
    order: u64,
    phi: usize,
    minimal_poly: IntPoly,
    monomials: Vec<IntPoly>,
}

static ORDER_CACHE: OnceLock<RwLock<HashMap<u64, Arc<OrderData>>>> = OnceLock::new();

fn order_data(m: u64) -> Arc<OrderData> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let cache = ORDER_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().unwrap().get(&m) {
        return d.clone();
    }
    let data = Arc::new(OrderData::build(m));
    let mut guard = cache.write().unwrap();
    guard.entry(m).or_insert(data).clone()
}

impl OrderData {
    fn build(m: u64) -> OrderData {
        let minimal_poly = cyclo_poly_cached(m).as_ref().clone();
        let phi = minimal_poly.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(m));
        let mut monomials: Vec<IntPoly> = Vec::with_capacity(m as usize);
        for j in 0..phi.min(m as usize) {
            let mut row = vec![BigInt::zero(); phi];
            row[j] = BigInt::one();
            monomials.push(row);
        }
        // x^j = x * x^{j-1}, reduced by the monic Φ_M.
        for _j in phi..m as usize {
            let prev = monomials.last().unwrap();
            let mut row = vec![BigInt::zero(); phi + 1];
            row[1..].clone_from_slice(prev);
            let lead = row[phi].clone();
            if !lead.is_zero() {
                for (i, c) in minimal_poly.iter().enumerate().take(phi) {
                    row[i] -= &lead * c;
                }
            }
            row.truncate(phi);
            monomials.push(row);
        }
        OrderData {
            order: m,
            phi,
            minimal_poly,
            monomials,
        }
    }

    /// Reduce an arbitrary-degree polynomial in ζ to canonical coefficients,
    /// using ζ^M = 1 and the monomial table.
    fn reduce(&self, poly: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.phi];
        for (j, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let jm = j % self.order as usize;
            if jm < self.phi {
                out[jm] += c;
            } else {
                for (i, w) in self.monomials[jm].iter().enumerate() {
                    if !w.is_zero() {
                        out[i] += c * w;
                    }
                }
            }
        }
        out
    }
}

/// An element of Q(ζ_M) in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Build from an arbitrary polynomial in ζ_M (any degree); reduces to
    /// canonical form.
    pub fn new(order: u64, poly: &[Rational]) -> Self {
        let data = order_data(order);
        Cyclotomic {
            order,
            coeffs: data.reduce(poly),
        }
    }

    pub fn zero(order: u64) -> Self {
        let data = order_data(order);
        Cyclotomic {
            order,
            coeffs: vec![Rational::zero(); data.phi],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, value: Rational) -> Self {
        let data = order_data(order);
        let mut coeffs = vec![Rational::zero(); data.phi];
        coeffs[0] = value;
        Cyclotomic { order, coeffs }
    }

    /// ζ_M^(e mod M) in canonical form.
    pub fn root_of_unity(order: u64, e: i64) -> Self {
        let data = order_data(order);
        let j = e.rem_euclid(order as i64) as usize;
        let coeffs = if j < data.phi {
            let mut c = vec![Rational::zero(); data.phi];
            c[j] = Rational::one();
            c
        } else {
            data.monomials[j]
                .iter()
                .map(|w| Rational::from(w.clone()))
                .collect()
        };
        Cyclotomic { order, coeffs }
    }

    /// |2 sin(π m / n)| as an exact element of Q(ζ_order).
    ///
    /// The angle is normalized into (0, π) before the element is constructed,
    /// so the result is real and positive under every real embedding. The
    /// working order must be a multiple of 4n so that both ζ_{2n} and the
    /// imaginary unit are available.
    pub fn two_sin(m: i64, n: u64, order: u64) -> Result<Self> {
        if n == 0 || order % (4 * n) != 0 {
            return Err(Error::SineOrder { order, n });
        }
        let m0 = m.rem_euclid(n as i64) as u64;
        if m0 == 0 {
            return Err(Error::SineZero { m, n });
        }
        // |2 sin(π m0/n)| = -i (ζ_{2n}^{m0} - ζ_{2n}^{-m0}) with 0 < m0 < n.
        let half = (order / (2 * n)) as i64;
        let plus = Cyclotomic::root_of_unity(order, m0 as i64 * half);
        let minus = Cyclotomic::root_of_unity(order, -(m0 as i64) * half);
        let neg_i = Cyclotomic::root_of_unity(order, 3 * order as i64 / 4);
        (&plus - &minus).checked_mul(&neg_i)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// An element is rational iff all coefficients of index ≥ 1 vanish.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn checked_add(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        self.check_order(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Cyclotomic::zero(self.order));
        }
        let mut conv = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let data = order_data(self.order);
        Ok(Cyclotomic {
            order: self.order,
            coeffs: data.reduce(&conv),
        })
    }

    pub fn negate(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// z^e with signed exponent; negative exponents go through `inverse`.
    pub fn pow(&self, e: i64) -> Result<Cyclotomic> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut result = Cyclotomic::one(self.order);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm of the
    /// representing polynomial against Φ_M over the rationals.
    pub fn inverse(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.order));
        }
        let data = order_data(self.order);
        let phi_m: Vec<Rational> = data
            .minimal_poly
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let a: Vec<Rational> = self.coeffs.clone();
        let (g, u) = rat_poly_ext_gcd(&a, &phi_m);
        // Φ_M is irreducible and deg a < deg Φ_M, so the gcd is a nonzero constant.
        debug_assert_eq!(poly_degree(&g), Some(0));
        let scale = g[0].recip();
        let inv_poly: Vec<Rational> = u.iter().map(|c| c * &scale).collect();
        let inv = Cyclotomic {
            order: self.order,
            coeffs: data.reduce(&inv_poly),
        };
        debug_assert!(inv.checked_mul(self).unwrap() == Cyclotomic::one(self.order));
        Ok(inv)
    }

    /// Embed into Q(ζ_target) where `order | target`.
    pub fn lift_to(&self, target: u64) -> Result<Cyclotomic> {
        if target == self.order {
            return Ok(self.clone());
        }
        if target % self.order != 0 {
            return Err(Error::BadLift {
                from: self.order,
                to: target,
            });
        }
        let step = (target / self.order) as i64;
        let mut acc = Cyclotomic::zero(target);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term = Cyclotomic::root_of_unity(target, j as i64 * step).scale(c);
                acc = acc.checked_add(&term)?;
            }
        }
        Ok(acc)
    }

    /// Extract the rational value; errors with the offending coefficients if
    /// any non-constant canonical coefficient is nonzero.
    pub fn to_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            let offending: Vec<(usize, String)> = self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, format_rational(c)))
                .collect();
            Err(Error::NotRational(offending))
        }
    }

    fn check_order(&self, rhs: &Cyclotomic) -> Result<()> {
        if self.order == rhs.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order, rhs.order))
        }
    }
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("matching cyclotomic orders")
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs).expect("matching cyclotomic orders")
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("matching cyclotomic orders")
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.negate()
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(order {}, {})", self.order, self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if j == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "z^{}", j)?;
            } else {
                write!(f, "{}*z^{}", mag, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicWire {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicWire {
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = CyclotomicWire::deserialize(deserializer)?;
        let data = order_data(wire.order);
        if wire.coeffs.len() != data.phi {
            return Err(D::Error::custom(format!(
                "expected {} coefficients for order {}, got {}",
                data.phi,
                wire.order,
                wire.coeffs.len()
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Cyclotomic {
            order: wire.order,
            coeffs,
        })
    }
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn rat_poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    let dn = match poly_degree(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![], rem),
    };
    let mut quot = vec![Rational::zero(); dn - dd + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, dj) in den.iter().enumerate().take(dd + 1) {
            let prod = &c * dj;
            rem[i + j] -= prod;
        }
    }
    while rem.last().is_some_and(Rational::is_zero) {
        rem.pop();
    }
    (quot, rem)
}

fn rat_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn rat_poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    while out.last().is_some_and(Rational::is_zero) {
        out.pop();
    }
    out
}

/// Returns (g, u) with u*a ≡ g (mod b) and g = gcd(a, b).
fn rat_poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut u0 = vec![Rational::one()];
    let mut u1: Vec<Rational> = vec![];
    while poly_degree(&r1).is_some() {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let u = rat_poly_sub(&u0, &rat_poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
    }
    (r0, u0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smallest_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), big(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), big(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), big(&[1, 0, 1]));
    }

    #[test]
    fn twelfth_cyclotomic_polynomial_against_division_oracle() {
        // Oracle: divide x^12 - 1 by the product of the hand-written
        // Φ_1, Φ_2, Φ_3, Φ_4, Φ_6.
        let small: Vec<Vec<BigInt>> = vec![
            big(&[-1, 1]),
            big(&[1, 1]),
            big(&[1, 1, 1]),
            big(&[1, 0, 1]),
            big(&[1, -1, 1]),
        ];
        let mut product = big(&[1]);
        for f in &small {
            let mut out = vec![BigInt::zero(); product.len() + f.len() - 1];
            for (i, a) in product.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            product = out;
        }
        let mut x12 = vec![BigInt::zero(); 13];
        x12[0] = BigInt::from(-1);
        x12[12] = BigInt::one();
        let expected = int_poly_div_exact(&x12, &product);
        assert_eq!(expected, big(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), expected);
    }

    #[test]
    fn phi_degree_matches_totient() {
        for m in 1..=40 {
            assert_eq!(
                cyclotomic_polynomial(m).len() as u64 - 1,
                euler_phi(m),
                "order {m}"
            );
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(
            Cyclotomic::root_of_unity(4, 2),
            Cyclotomic::from_rational(4, rat_int(-1))
        );
        assert_eq!(Cyclotomic::root_of_unity(6, 6), Cyclotomic::one(6));
        let sum = (1..=4)
            .map(|e| Cyclotomic::root_of_unity(5, e))
            .fold(Cyclotomic::zero(5), |acc, z| &acc + &z);
        assert_eq!(sum, Cyclotomic::from_rational(5, rat_int(-1)));
    }

    #[test]
    fn multiplication_and_zero_divisor() {
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_rational(4, rat_int(-1)));

        let z = Cyclotomic::root_of_unity(12, 7);
        assert_eq!(&z + &Cyclotomic::zero(12), z);

        // 1 + ζ_3 + ζ_3² = 0 in Q(ζ_3).
        let omega = Cyclotomic::root_of_unity(3, 1);
        let s = &(&Cyclotomic::one(3) + &omega) + &omega.pow(2).unwrap();
        assert!(s.is_zero());
        let w = Cyclotomic::root_of_unity(3, 2).scale(&rat(7, 3));
        assert!(s.checked_mul(&w).unwrap().is_zero());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Cyclotomic::root_of_unity(3, 1);
        let b = Cyclotomic::root_of_unity(4, 1);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::OrderMismatch(3, 4))
        ));
        let lifted = a.lift_to(12).unwrap();
        let b12 = b.lift_to(12).unwrap();
        assert!(lifted.checked_mul(&b12).is_ok());
        assert_eq!(lifted, Cyclotomic::root_of_unity(12, 4));
        assert!(matches!(a.lift_to(10), Err(Error::BadLift { .. })));
    }

    #[test]
    fn inverses() {
        for e in 1..12 {
            let z = Cyclotomic::root_of_unity(12, e);
            assert_eq!(z.inverse().unwrap(), Cyclotomic::root_of_unity(12, 12 - e));
        }
        let z = &Cyclotomic::one(4) + &Cyclotomic::root_of_unity(4, 1);
        let inv = z.inverse().unwrap();
        assert_eq!(inv.checked_mul(&z).unwrap(), Cyclotomic::one(4));
        assert!(matches!(
            Cyclotomic::zero(8).inverse(),
            Err(Error::DivisionByZero(8))
        ));
    }

    #[test]
    fn signed_powers() {
        let z = Cyclotomic::root_of_unity(8, 3);
        assert_eq!(z.pow(0).unwrap(), Cyclotomic::one(8));
        assert_eq!(z.pow(-1).unwrap(), z.inverse().unwrap());
        let w = &Cyclotomic::one(8) + &z;
        assert_eq!(
            w.pow(-3).unwrap().checked_mul(&w.pow(3).unwrap()).unwrap(),
            Cyclotomic::one(8)
        );
    }

    #[test]
    fn two_sin_values() {
        // 2 sin(π/2) = 2.
        let s = Cyclotomic::two_sin(1, 2, 8).unwrap();
        assert_eq!(s.to_rational().unwrap(), rat_int(2));
        // (2 sin(π/3))² = 3.
        let s = Cyclotomic::two_sin(1, 3, 12).unwrap();
        assert_eq!(s.pow(2).unwrap().to_rational().unwrap(), rat_int(3));
        // sin(2π/3) = sin(π/3), same canonical element.
        assert_eq!(Cyclotomic::two_sin(2, 3, 12).unwrap(), s);
        // Negative angles normalize into (0, π).
        assert_eq!(Cyclotomic::two_sin(-1, 3, 12).unwrap(), s);
        assert!(matches!(
            Cyclotomic::two_sin(6, 3, 12),
            Err(Error::SineZero { .. })
        ));
        assert!(matches!(
            Cyclotomic::two_sin(1, 3, 10),
            Err(Error::SineOrder { .. })
        ));
    }

    #[test]
    fn two_sin_squared_identity() {
        // two_sin(m, N)² = 2 − ζ_N^m − ζ_N^{−m}, lifted to the working order.
        for n in 2..=10u64 {
            let order = 4 * n;
            for m in 1..n as i64 {
                let lhs = Cyclotomic::two_sin(m, n, order).unwrap().pow(2).unwrap();
                let zp = Cyclotomic::root_of_unity(n, m).lift_to(order).unwrap();
                let zm = Cyclotomic::root_of_unity(n, -m).lift_to(order).unwrap();
                let rhs = &(&Cyclotomic::from_rational(order, rat_int(2)) - &zp) - &zm;
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn sine_product_identity() {
        // Π_{m=1}^{N−1} 2 sin(π m/N) = N.
        for n in 2..=12u64 {
            let order = 4 * n;
            let mut prod = Cyclotomic::one(order);
            for m in 1..n as i64 {
                prod = prod
                    .checked_mul(&Cyclotomic::two_sin(m, n, order).unwrap())
                    .unwrap();
            }
            assert_eq!(prod.to_rational().unwrap(), rat_int(n as i64), "N={n}");
        }
    }

    #[test]
    fn rational_extraction() {
        let z = Cyclotomic::root_of_unity(4, 2);
        assert_eq!(z.to_rational().unwrap(), rat_int(-1));
        let sum = (1..=4)
            .map(|e| Cyclotomic::root_of_unity(5, e))
            .fold(Cyclotomic::zero(5), |acc, z| &acc + &z);
        assert_eq!(sum.to_rational().unwrap(), rat_int(-1));
        match Cyclotomic::root_of_unity(3, 1).to_rational() {
            Err(Error::NotRational(offending)) => {
                assert_eq!(offending, vec![(1, "1".to_string())]);
            }
            other => panic!("expected NotRational, got {other:?}"),
        }
    }

    #[test]
    fn serialization_round_trip() {
        let z = &Cyclotomic::root_of_unity(12, 5).scale(&rat(-7, 3))
            + &Cyclotomic::from_rational(12, rat(1, 2));
        let json = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
        // Wrong coefficient count is rejected.
        let bad = r#"{"order": 4, "coeffs": ["1"]}"#;
        assert!(serde_json::from_str::<Cyclotomic>(bad).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn element(order: u64) -> impl Strategy<Value = Cyclotomic> {
            let phi = euler_phi(order) as usize;
            proptest::collection::vec((-4i64..=4, 1i64..=3), phi).prop_map(move |cs| {
                let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
                Cyclotomic::new(order, &coeffs)
            })
        }

        fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
            prop::sample::select(vec![3u64, 4, 5, 6, 8, 12])
                .prop_flat_map(|order| (element(order), element(order), element(order)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn field_axioms((a, b, c) in triple()) {
                let order = a.order();
                // Associativity and commutativity.
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                // Distributivity.
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                // Inverse law.
                if !a.is_zero() {
                    prop_assert_eq!(a.inverse().unwrap().checked_mul(&a).unwrap(),
                                    Cyclotomic::one(order));
                }
            }
        }
    }
}
