//! Truncated bivariate power series in (u, z) with rational coefficients.

use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// Coefficients c[i][j] of u^i z^j for i <= u_max, j <= z_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    u_max: usize,
    z_max: usize,
    c: Vec<Vec<Rational>>,
    /// Set when an operation combined series of different truncation orders.
    pub truncation_mixed: bool,
}

impl BiSeries {
    pub fn zero(u_max: usize, z_max: usize) -> Self {
        BiSeries {
            u_max,
            z_max,
            c: vec![vec![Rational::zero(); z_max + 1]; u_max + 1],
            truncation_mixed: false,
        }
    }

    pub fn one(u_max: usize, z_max: usize) -> Self {
        let mut s = Self::zero(u_max, z_max);
        s.c[0][0] = Rational::one();
        s
    }

    pub fn monomial(u_max: usize, z_max: usize, i: usize, j: usize, coeff: Rational) -> Self {
        let mut s = Self::zero(u_max, z_max);
        if i <= u_max && j <= z_max {
            s.c[i][j] = coeff;
        }
        s
    }

    pub fn u_max(&self) -> usize {
        self.u_max
    }

    pub fn z_max(&self) -> usize {
        self.z_max
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        if i <= self.u_max && j <= self.z_max {
            self.c[i][j].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        if i <= self.u_max && j <= self.z_max {
            self.c[i][j] = v;
        }
    }

    /// Coefficient of z^j as a vector indexed by the power of u.
    pub fn z_coeff(&self, j: usize) -> Vec<Rational> {
        (0..=self.u_max).map(|i| self.coeff(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = self.clone();
        for row in &mut out.c {
            for x in row.iter_mut() {
                *x *= k;
            }
        }
        out
    }

    fn aligned(&self, other: &Self) -> (usize, usize, bool) {
        let mixed = self.u_max != other.u_max || self.z_max != other.z_max;
        (
            self.u_max.min(other.u_max),
            self.z_max.min(other.z_max),
            mixed || self.truncation_mixed || other.truncation_mixed,
        )
    }

    pub fn add_series(&self, other: &Self) -> Self {
        let (um, zm, mixed) = self.aligned(other);
        let mut out = Self::zero(um, zm);
        out.truncation_mixed = mixed;
        for i in 0..=um {
            for j in 0..=zm {
                out.c[i][j] = &self.c[i][j] + &other.c[i][j];
            }
        }
        out
    }

    pub fn mul_series(&self, other: &Self) -> Self {
        let (um, zm, mixed) = self.aligned(other);
        let mut out = Self::zero(um, zm);
        out.truncation_mixed = mixed;
        for i1 in 0..=um {
            for j1 in 0..=zm {
                let a = &self.c[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(um - i1) {
                    for j2 in 0..=(zm - j1) {
                        let b = &other.c[i2][j2];
                        if !b.is_zero() {
                            out.c[i1 + i2][j1 + j2] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    fn constant(&self) -> Rational {
        self.c[0][0].clone()
    }

    fn nilpotent_order(&self) -> usize {
        self.u_max + self.z_max + 1
    }

    /// exp of a series with vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::InvalidArgument(
                "exp of a series with nonzero constant term".into(),
            ));
        }
        let mut out = Self::one(self.u_max, self.z_max);
        let mut power = Self::one(self.u_max, self.z_max);
        for k in 1..=self.nilpotent_order() {
            power = power.mul_series(self).scale(&int(k as i64).recip());
            if power.is_zero() {
                break;
            }
            out = out.add_series(&power);
        }
        out.truncation_mixed = self.truncation_mixed;
        Ok(out)
    }

    /// log of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::InvalidArgument(
                "log of a series whose constant term is not one".into(),
            ));
        }
        let x = self.add_series(&Self::one(self.u_max, self.z_max).neg());
        let mut out = Self::zero(self.u_max, self.z_max);
        let mut power = Self::one(self.u_max, self.z_max);
        for k in 1..=self.nilpotent_order() {
            power = power.mul_series(&x);
            if power.is_zero() {
                break;
            }
            let sgn = if k % 2 == 1 { int(1) } else { int(-1) };
            out = out.add_series(&power.scale(&(sgn / int(k as i64))));
        }
        out.truncation_mixed = self.truncation_mixed;
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant();
        if c0.is_zero() {
            return Err(Error::InvalidArgument(
                "inverse of a series with zero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        // 1/(c0 (1 + y)) = inv0 * sum (-y)^k
        let neg_y = self.scale(&inv0).add_series(&Self::one(self.u_max, self.z_max).neg()).neg();
        let mut out = Self::one(self.u_max, self.z_max);
        let mut power = Self::one(self.u_max, self.z_max);
        for _ in 1..=self.nilpotent_order() {
            power = power.mul_series(&neg_y);
            if power.is_zero() {
                break;
            }
            out = out.add_series(&power);
        }
        let mut out = out.scale(&inv0);
        out.truncation_mixed = self.truncation_mixed;
        Ok(out)
    }
}

impl Neg for BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        self.scale(&int(-1))
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, o: &BiSeries) -> BiSeries {
        self.add_series(o)
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, o: &BiSeries) -> BiSeries {
        self.add_series(&o.clone().neg())
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, o: &BiSeries) -> BiSeries {
        self.mul_series(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn exp_log_roundtrip() {
        let mut s = BiSeries::zero(4, 4);
        s.set(1, 1, rat(1, 12));
        s.set(2, 0, rat(-3, 5));
        s.set(0, 3, int(2));
        let e = s.exp().unwrap();
        assert_eq!(e.log().unwrap(), s);
    }

    #[test]
    fn inverse_is_inverse() {
        let mut s = BiSeries::one(3, 3);
        s.set(1, 2, rat(2, 7));
        s.set(0, 1, int(-1));
        let prod = s.mul_series(&s.inverse().unwrap());
        assert_eq!(prod, BiSeries::one(3, 3));
    }

    #[test]
    fn mixed_truncation_flagged() {
        let a = BiSeries::one(2, 2);
        let b = BiSeries::one(3, 2);
        let c = &a * &b;
        assert!(c.truncation_mixed);
        assert_eq!(c.u_max(), 2);
    }
}
