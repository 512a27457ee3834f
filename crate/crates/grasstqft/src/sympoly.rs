//! Sparse multivariate polynomials over the rationals in the Chern-root
//! variables x_1, ..., x_r.
//!
//! Exponent vectors are dense and fixed-length (r is small); sparsity lives in
//! the term table. Schur polynomials are built division-free through the
//! Jacobi–Trudi determinant in complete homogeneous symmetric polynomials; the
//! bialternant ratio is kept as an independent cross-check path at evaluated
//! points only. `schur_at_roots` is the fast numeric path: power sums, then
//! Newton's identities (dividing only by integers), then the Jacobi–Trudi
//! determinant over field values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{rat_int, Rational};

/// Polynomial in `nvars` variables; term table from exponent vectors to
/// nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct SymPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> SymPoly {
        SymPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> SymPoly {
        SymPoly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, value: Rational) -> SymPoly {
        let mut p = SymPoly::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    /// The variable x_i (1-based).
    pub fn var(nvars: usize, i: usize) -> Result<SymPoly> {
        if i == 0 || i > nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: nvars,
            });
        }
        let mut expts = vec![0; nvars];
        expts[i - 1] = 1;
        Ok(SymPoly::monomial(nvars, expts, Rational::one()))
    }

    pub fn monomial(nvars: usize, expts: Vec<u32>, coeff: Rational) -> SymPoly {
        assert_eq!(expts.len(), nvars);
        let mut p = SymPoly::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(expts, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total exponent; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn coeff(&self, expts: &[u32]) -> Rational {
        self.terms.get(expts).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert_term(&mut self, expts: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expts) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, rhs: &SymPoly) -> Result<SymPoly> {
        self.check_vars(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &SymPoly) -> Result<SymPoly> {
        self.checked_add(&rhs.negate())
    }

    pub fn checked_mul(&self, rhs: &SymPoly) -> Result<SymPoly> {
        self.check_vars(rhs)?;
        let mut out = SymPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let expts: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(expts, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> SymPoly {
        SymPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> SymPoly {
        if q.is_zero() {
            return SymPoly::zero(self.nvars);
        }
        SymPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SymPoly {
        let mut result = SymPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).unwrap();
            }
        }
        result
    }

    /// Exact partial derivative with respect to x_i (1-based).
    pub fn differentiate(&self, i: usize) -> Result<SymPoly> {
        if i == 0 || i > self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.nvars,
            });
        }
        let mut out = SymPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i - 1];
            if k == 0 {
                continue;
            }
            let mut expts = e.clone();
            expts[i - 1] -= 1;
            out.insert_term(expts, c * rat_int(k as i64));
        }
        Ok(out)
    }

    /// Exact evaluation at a tuple of field points, one per variable, by
    /// term-wise accumulation over cached variable powers.
    pub fn evaluate(&self, points: &[Cyclotomic]) -> Result<Cyclotomic> {
        if points.len() != self.nvars {
            return Err(Error::PointCountMismatch {
                expected: self.nvars,
                got: points.len(),
            });
        }
        if self.nvars == 0 {
            let order = 1;
            let mut acc = Cyclotomic::zero(order);
            for (_, c) in &self.terms {
                acc = acc.checked_add(&Cyclotomic::from_rational(order, c.clone()))?;
            }
            return Ok(acc);
        }
        let order = points[0].order();
        // Per-variable power tables up to the maximal exponent in any term.
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, &x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        let mut powers: Vec<Vec<Cyclotomic>> = Vec::with_capacity(self.nvars);
        for (v, point) in points.iter().enumerate() {
            let mut table = Vec::with_capacity(max_exp[v] as usize + 1);
            table.push(Cyclotomic::one(order));
            for _ in 0..max_exp[v] {
                table.push(table.last().unwrap().checked_mul(point)?);
            }
            powers.push(table);
        }
        let mut acc = Cyclotomic::zero(order);
        for (e, c) in &self.terms {
            let mut term = Cyclotomic::from_rational(order, c.clone());
            for (v, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = term.checked_mul(&powers[v][x as usize])?;
                }
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    fn check_vars(&self, rhs: &SymPoly) -> Result<()> {
        if self.nvars == rhs.nvars {
            Ok(())
        } else {
            Err(Error::PointCountMismatch {
                expected: self.nvars,
                got: rhs.nvars,
            })
        }
    }
}

impl std::ops::Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        self.checked_add(rhs).expect("matching variable counts")
    }
}

impl std::ops::Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self.checked_sub(rhs).expect("matching variable counts")
    }
}

impl std::ops::Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        self.checked_mul(rhs).expect("matching variable counts")
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SymPoly {
    /// Canonical printing: graded lexicographic monomial order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| {
            (
                e.iter().map(|&x| x as u64).sum::<u64>(),
                (*e).clone(),
            )
        });
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (v, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                if x == 1 {
                    write!(f, "x{}", v + 1)?;
                } else {
                    write!(f, "x{}^{}", v + 1, x)?;
                }
            }
        }
        Ok(())
    }
}

/// The i-th elementary symmetric polynomial in x_1, ..., x_r; σ_0 = 1.
pub fn elementary(i: u32, r: usize) -> Result<SymPoly> {
    if i as usize > r {
        return Err(Error::IndexOutOfRange {
            index: i as usize,
            limit: r,
        });
    }
    let mut out = SymPoly::zero(r);
    let mut subset: Vec<usize> = (0..i as usize).collect();
    loop {
        let mut expts = vec![0u32; r];
        for &v in &subset {
            expts[v] = 1;
        }
        out.insert_term(expts, Rational::one());
        if !next_subset(&mut subset, r) {
            break;
        }
    }
    Ok(out)
}

/// The i-th elementary symmetric polynomial with the variable x_omit removed
/// (`omit` is 1-based); a polynomial in the full variable set.
pub fn elementary_omit(i: u32, omit: usize, r: usize) -> Result<SymPoly> {
    if omit == 0 || omit > r {
        return Err(Error::IndexOutOfRange {
            index: omit,
            limit: r,
        });
    }
    if i as usize > r - 1 {
        return Err(Error::IndexOutOfRange {
            index: i as usize,
            limit: r - 1,
        });
    }
    let keep: Vec<usize> = (0..r).filter(|&v| v != omit - 1).collect();
    let mut out = SymPoly::zero(r);
    let mut subset: Vec<usize> = (0..i as usize).collect();
    loop {
        let mut expts = vec![0u32; r];
        for &s in &subset {
            expts[keep[s]] = 1;
        }
        out.insert_term(expts, Rational::one());
        if !next_subset(&mut subset, r - 1) {
            break;
        }
    }
    Ok(out)
}

fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let r = subset.len();
    if r == 0 {
        return false;
    }
    let mut i = r;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (r - i) {
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The complete homogeneous symmetric polynomial h_m in r variables.
pub fn complete_homogeneous(m: u32, r: usize) -> SymPoly {
    let mut out = SymPoly::zero(r);
    let mut expts = vec![0u32; r];
    fn rec(out: &mut SymPoly, expts: &mut Vec<u32>, var: usize, left: u32, r: usize) {
        if var == r - 1 {
            expts[var] = left;
            out.insert_term(expts.clone(), Rational::one());
            expts[var] = 0;
            return;
        }
        for v in 0..=left {
            expts[var] = v;
            rec(out, expts, var + 1, left - v, r);
        }
        expts[var] = 0;
    }
    if r == 0 {
        if m == 0 {
            return SymPoly::one(0);
        }
        return out;
    }
    rec(&mut out, &mut expts, 0, m, r);
    out
}

/// The Schur polynomial σ_λ in r variables, built division-free through the
/// Jacobi–Trudi determinant det(h_{λ_i − i + j}).
pub fn schur_poly(lambda: &Partition, r: usize) -> Result<SymPoly> {
    if lambda.len() > r {
        return Err(Error::PartitionOutOfBox {
            rows: lambda.rows().to_vec(),
            r: r as u32,
            k: u32::MAX,
        });
    }
    let l = lambda.len();
    if l == 0 {
        return Ok(SymPoly::one(r));
    }
    let mut mat: Vec<Vec<SymPoly>> = Vec::with_capacity(l);
    for i in 1..=l {
        let mut row = Vec::with_capacity(l);
        for j in 1..=l {
            let idx = lambda.row(i - 1) as i64 - i as i64 + j as i64;
            let entry = if idx < 0 {
                SymPoly::zero(r)
            } else {
                complete_homogeneous(idx as u32, r)
            };
            row.push(entry);
        }
        mat.push(row);
    }
    Ok(determinant(
        &mat,
        SymPoly::zero(r),
        SymPoly::one(r),
        |a, b| a.checked_add(b).unwrap(),
        |a, b| a.checked_sub(b).unwrap(),
        |a, b| a.checked_mul(b).unwrap(),
    ))
}

/// The first-order operator
/// D_l = (g−1)(r−l+1)(n−r+l−1)·σ_{l−1} + Σ_k σ_{l−1;k} · x_k · ∂/∂x_k
/// applied to P, exactly. Requires 2 ≤ l ≤ r.
pub fn apply_dl(p: &SymPoly, l: u32, g: u32, r: usize, n: u32) -> Result<SymPoly> {
    if l < 2 || l as usize > r {
        return Err(Error::OperatorIndex { l, r: r as u32 });
    }
    let scalar = rat_int(g as i64 - 1)
        * rat_int(r as i64 - l as i64 + 1)
        * rat_int(n as i64 - r as i64 + l as i64 - 1);
    let mut out = elementary(l - 1, r)?.checked_mul(p)?.scale(&scalar);
    for k in 1..=r {
        let xk = SymPoly::var(r, k)?;
        let term = elementary_omit(l - 1, k, r)?
            .checked_mul(&xk)?
            .checked_mul(&p.differentiate(k)?)?;
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

/// Exact Schur value at pairwise-distinct field points: power sums (cheap for
/// roots of unity), Newton's identities over integer divisors, then the
/// numeric Jacobi–Trudi determinant.
pub fn schur_at_roots(lambda: &Partition, points: &[Cyclotomic]) -> Result<Cyclotomic> {
    let r = points.len();
    ensure_distinct(points)?;
    if lambda.len() > r {
        return Err(Error::PartitionOutOfBox {
            rows: lambda.rows().to_vec(),
            r: r as u32,
            k: u32::MAX,
        });
    }
    if r == 0 {
        return Ok(Cyclotomic::one(1));
    }
    let order = points[0].order();
    let l = lambda.len();
    if l == 0 {
        return Ok(Cyclotomic::one(order));
    }
    let max_h = (lambda.row(0) as usize + l - 1) as u32;
    let h = complete_homogeneous_values(points, max_h)?;
    let mut mat: Vec<Vec<Cyclotomic>> = Vec::with_capacity(l);
    for i in 1..=l {
        let mut row = Vec::with_capacity(l);
        for j in 1..=l {
            let idx = lambda.row(i - 1) as i64 - i as i64 + j as i64;
            let entry = if idx < 0 {
                Cyclotomic::zero(order)
            } else {
                h[idx as usize].clone()
            };
            row.push(entry);
        }
        mat.push(row);
    }
    Ok(determinant(
        &mat,
        Cyclotomic::zero(order),
        Cyclotomic::one(order),
        |a, b| a.checked_add(b).unwrap(),
        |a, b| a.checked_sub(b).unwrap(),
        |a, b| a.checked_mul(b).unwrap(),
    ))
}

/// Values h_0, ..., h_max at the points, through power sums and Newton's
/// identities m·h_m = Σ_{i=1}^m p_i h_{m−i} (division only by the integer m).
fn complete_homogeneous_values(points: &[Cyclotomic], max: u32) -> Result<Vec<Cyclotomic>> {
    let order = points[0].order();
    let mut power_sums: Vec<Cyclotomic> = Vec::with_capacity(max as usize + 1);
    power_sums.push(Cyclotomic::from_rational(
        order,
        rat_int(points.len() as i64),
    ));
    let mut current: Vec<Cyclotomic> = vec![Cyclotomic::one(order); points.len()];
    for _ in 1..=max {
        let mut sum = Cyclotomic::zero(order);
        for (cur, point) in current.iter_mut().zip(points) {
            *cur = cur.checked_mul(point)?;
            sum = sum.checked_add(cur)?;
        }
        power_sums.push(sum);
    }
    let mut h: Vec<Cyclotomic> = Vec::with_capacity(max as usize + 1);
    h.push(Cyclotomic::one(order));
    for m in 1..=max as usize {
        let mut acc = Cyclotomic::zero(order);
        for i in 1..=m {
            acc = acc.checked_add(&power_sums[i].checked_mul(&h[m - i])?)?;
        }
        h.push(acc.scale(&Rational::new(1.into(), (m as i64).into())));
    }
    Ok(h)
}

/// The bialternant ratio det(x_i^{λ_j + r − j}) / V(x): the independent
/// cross-check path for Schur values, using one field inversion of the
/// Vandermonde determinant.
pub fn schur_at_roots_bialternant(
    lambda: &Partition,
    points: &[Cyclotomic],
) -> Result<Cyclotomic> {
    let r = points.len();
    ensure_distinct(points)?;
    if lambda.len() > r {
        return Err(Error::PartitionOutOfBox {
            rows: lambda.rows().to_vec(),
            r: r as u32,
            k: u32::MAX,
        });
    }
    if r == 0 {
        return Ok(Cyclotomic::one(1));
    }
    let order = points[0].order();
    let mut num: Vec<Vec<Cyclotomic>> = Vec::with_capacity(r);
    for point in points {
        let mut row = Vec::with_capacity(r);
        for j in 1..=r {
            let e = lambda.row(j - 1) as i64 + (r - j) as i64;
            row.push(point.pow(e)?);
        }
        num.push(row);
    }
    let numerator = determinant(
        &num,
        Cyclotomic::zero(order),
        Cyclotomic::one(order),
        |a, b| a.checked_add(b).unwrap(),
        |a, b| a.checked_sub(b).unwrap(),
        |a, b| a.checked_mul(b).unwrap(),
    );
    let mut vandermonde = Cyclotomic::one(order);
    for i in 0..r {
        for j in i + 1..r {
            vandermonde = vandermonde.checked_mul(&points[i].checked_sub(&points[j])?)?;
        }
    }
    numerator.checked_mul(&vandermonde.inverse()?)
}

fn ensure_distinct(points: &[Cyclotomic]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    Ok(())
}

/// Determinant by cofactor expansion along the last used row, memoized on the
/// column subset; division-free.
fn determinant<T: Clone>(
    mat: &[Vec<T>],
    zero: T,
    one: T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> T {
    let n = mat.len();
    debug_assert!(mat.iter().all(|row| row.len() == n));
    assert!(n < 64, "determinant size out of envelope");
    let full: u64 = (1u64 << n) - 1;
    let mut memo: HashMap<u64, T> = HashMap::new();
    memo.insert(0, one);
    fn rec<T: Clone>(
        mask: u64,
        mat: &[Vec<T>],
        zero: &T,
        memo: &mut HashMap<u64, T>,
        add: &impl Fn(&T, &T) -> T,
        sub: &impl Fn(&T, &T) -> T,
        mul: &impl Fn(&T, &T) -> T,
    ) -> T {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let row = mask.count_ones() as usize - 1;
        let mut acc = zero.clone();
        let mut pos = 0usize;
        for col in 0..mat.len() {
            if mask & (1 << col) == 0 {
                continue;
            }
            let minor = rec(mask & !(1 << col), mat, zero, memo, add, sub, mul);
            let term = mul(&mat[row][col], &minor);
            acc = if (row + pos) % 2 == 0 {
                add(&acc, &term)
            } else {
                sub(&acc, &term)
            };
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    rec(full, mat, &zero, &mut memo, &add, &sub, &mul)
}
