//! Exact rational arithmetic helpers, Bernoulli numbers, power sums and
//! univariate polynomial interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// (2k-1)!! with (-1)!! = 1.
pub fn double_factorial_odd(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut m = 2 * k - 1;
    while m > 1 {
        acc *= BigInt::from(m);
        m -= 2;
    }
    acc
}

/// Bernoulli numbers with B_1 = -1/2 (coefficients of x/(e^x - 1)).
fn bernoulli_table(upto: usize) -> Vec<Rational> {
    static TABLE: OnceLock<std::sync::Mutex<Vec<Rational>>> = OnceLock::new();
    let lock = TABLE.get_or_init(|| std::sync::Mutex::new(vec![Rational::one()]));
    let mut table = lock.lock().expect("bernoulli table poisoned");
    while table.len() <= upto {
        let m = table.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut s = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            s += Rational::from_integer(binomial(m as u32 + 1, k as u32)) * b;
        }
        let b = -s / Rational::from_integer(BigInt::from(m + 1));
        table.push(b);
    }
    table[..=upto].to_vec()
}

/// Bernoulli number B_n. Even indices are convention independent; B_1 is
/// returned as +1/2, matching the expansion x/(1 - e^{-x}) = 1 + x/2 + ...
pub fn bernoulli(n: u32) -> Result<Rational> {
    match n {
        0 => Ok(Rational::one()),
        1 => Ok(rat(1, 2)),
        n if n % 2 == 1 => Err(Error::InvalidArgument(format!(
            "Bernoulli index {n} is odd and greater than one"
        ))),
        n => Ok(bernoulli_table(n as usize)[n as usize].clone()),
    }
}

/// Even Bernoulli number, panicking on odd input. Internal convenience.
pub(crate) fn bern(n: u32) -> Rational {
    bernoulli(n).expect("even Bernoulli index")
}

/// Polynomial in r equal to sum_{a=1}^{r-1} a^m for every integer r >= 1.
pub fn faulhaber(m: u32) -> UniPoly {
    if m == 0 {
        return UniPoly::new(vec![int(-1), int(1)]);
    }
    let b = bernoulli_table(m as usize);
    let mut coeffs = vec![Rational::zero(); m as usize + 2];
    let scale = Rational::from_integer(BigInt::from(m + 1)).recip();
    for (k, bk) in b.iter().enumerate() {
        let c = Rational::from_integer(binomial(m + 1, k as u32)) * bk * &scale;
        coeffs[m as usize + 1 - k] += c;
    }
    UniPoly::new(coeffs)
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UniPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&int(x))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*r")?,
                _ => write!(f, "({c})*r^{i}")?,
            }
        }
        Ok(())
    }
}

/// Lagrange interpolation through the given points (Newton form internally).
/// Abscissae must be distinct.
pub fn interpolate(points: &[(Rational, Rational)]) -> Result<UniPoly> {
    let n = points.len();
    if n == 0 {
        return Ok(UniPoly::zero());
    }
    for i in 0..n {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(Error::InvalidArgument(
                    "interpolation nodes are not distinct".into(),
                ));
            }
        }
    }
    let xs: Vec<&Rational> = points.iter().map(|p| &p.0).collect();
    let mut dd: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut poly = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = UniPoly::new(vec![-xs[i].clone(), Rational::one()]);
        poly = poly.mul(&factor).add(&UniPoly::constant(dd[i].clone()));
    }
    Ok(poly)
}

/// Interpolates `f` on the consecutive integer window `start..start+len` and
/// checks the result has degree at most `len - 2`, so one node is redundant.
pub fn interpolate_window<F>(start: i64, len: usize, mut f: F) -> Result<UniPoly>
where
    F: FnMut(i64) -> Rational,
{
    let pts: Vec<(Rational, Rational)> = (0..len as i64)
        .map(|i| (int(start + i), f(start + i)))
        .collect();
    let poly = interpolate(&pts)?;
    if let Some(d) = poly.degree() {
        if d + 2 > len {
            return Err(Error::Polynomiality(format!(
                "window at {start} of length {len} produced degree {d}"
            )));
        }
    }
    Ok(poly)
}

pub fn to_f64(q: &Rational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Sign of (-1)^k as a rational.
pub fn sign(k: i64) -> Rational {
    if k.is_even() {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Multiset splits of a sorted multiset `items` into (left, right) together
/// with the number of labeled splits producing them.
pub fn multiset_splits(items: &[u32]) -> Vec<(Vec<u32>, Vec<u32>, BigInt)> {
    let mut groups: Vec<(u32, u32)> = Vec::new();
    for &x in items {
        match groups.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for &(v, c) in &groups {
        let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
        for (l, r, m) in &out {
            for take in 0..=c {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.extend(std::iter::repeat_n(v, take as usize));
                r2.extend(std::iter::repeat_n(v, (c - take) as usize));
                next.push((l2, r2, m * binomial(c, take)));
            }
        }
        out = next;
    }
    out
}

/// Compositions of `total` into `parts` positive integers.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if (total as usize) < parts {
            return;
        }
        let max_first = total - (parts as u32 - 1);
        for first in 1..=max_first {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Weak compositions of `total` into `parts` non-negative integers.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    compositions(total + parts as u32, parts)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x - 1).collect())
        .collect()
}

/// Serializes a rational as `{"num": "...", "den": "..."}` with decimal strings.
pub fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &q.numer().to_string())?;
    st.serialize_field("den", &q.denom().to_string())?;
    st.end()
}
