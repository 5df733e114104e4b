//! Fractions over a gcd domain, kept reduced with a normalized denominator.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::Pretty;
use crate::ring::{Field, FqAlgebra, GcdDomain, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Frac<R: GcdDomain> {
    num: R,
    den: R,
}

impl<R: GcdDomain> Frac<R> {
    pub fn new(num: R, den: R) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac::reduce(num, den))
    }

    pub fn from_ring(x: R) -> Self {
        let den = x.one_like();
        Frac { num: x, den }
    }

    fn reduce(num: R, den: R) -> Self {
        if num.is_zero() {
            return Frac {
                den: den.one_like(),
                num,
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.try_div(&g).expect("gcd divides"),
                den.try_div(&g).expect("gcd divides"),
            )
        };
        let u = d.unit_part();
        if !u.is_one() {
            n = n.try_div(&u).expect("unit");
            d = d.try_div(&u).expect("unit");
        }
        Frac { num: n, den: d }
    }

    pub fn num(&self) -> &R {
        &self.num
    }

    pub fn den(&self) -> &R {
        &self.den
    }

    pub fn into_parts(self) -> (R, R) {
        (self.num, self.den)
    }

    /// The numerator when the denominator is one.
    pub fn as_integral(&self) -> Option<&R> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac::reduce(
            self.num.clone() * o.den.clone(),
            self.den.clone() * o.num.clone(),
        ))
    }
}

impl<R: GcdDomain> Add for Frac<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return Frac::reduce(self.num + o.num, self.den);
        }
        Frac::reduce(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl<R: GcdDomain> Neg for Frac<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<R: GcdDomain> Sub for Frac<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<R: GcdDomain> Mul for Frac<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Frac {
                num: self.num * o.num,
                den: self.den,
            };
        }
        Frac::reduce(self.num * o.num, self.den * o.den)
    }
}

impl<R: GcdDomain> Div for Frac<R> {
    type Output = Self;
    /// Panics on division by zero; see [`Frac::checked_div`].
    fn div(self, o: Self) -> Self {
        self.checked_div(&o).expect("division by zero fraction")
    }
}

impl<R: GcdDomain> Ring for Frac<R> {
    fn zero_like(&self) -> Self {
        Frac {
            num: self.num.zero_like(),
            den: self.den.one_like(),
        }
    }
    fn one_like(&self) -> Self {
        Frac {
            num: self.num.one_like(),
            den: self.den.one_like(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Frac::from_ring(self.num.from_int_like(n))
    }
    fn characteristic(&self) -> u64 {
        self.num.characteristic()
    }
    fn const_field_size(&self) -> u64 {
        self.num.const_field_size()
    }
    /// The q-power map is injective, so the image stays reduced.
    fn frobenius(&self, k: u32) -> Self {
        Frac {
            num: self.num.frobenius(k),
            den: self.den.frobenius(k),
        }
    }
    fn try_div(&self, d: &Self) -> Option<Self> {
        self.checked_div(d).ok()
    }
}

impl<R: GcdDomain> Field for Frac<R> {
    fn inv(&self) -> Option<Self> {
        self.one_like().checked_div(self).ok()
    }
}

impl<R: GcdDomain> GcdDomain for Frac<R> {
    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            self.clone()
        } else {
            self.one_like()
        }
    }
    fn unit_part(&self) -> Self {
        if self.is_zero() {
            self.one_like()
        } else {
            self.clone()
        }
    }
    fn pth_root(&self) -> Option<Self> {
        Some(Frac::reduce(self.num.pth_root()?, self.den.pth_root()?))
    }
}

impl<R: GcdDomain + FqAlgebra> FqAlgebra for Frac<R> {
    fn embed(&self, c: &Fq) -> Self {
        Frac::from_ring(self.num.embed(c))
    }
}

impl<R: GcdDomain + Pretty> Pretty for Frac<R> {
    fn pretty(&self, vars: &[&str]) -> String {
        let n = self.num.pretty(vars);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.pretty(vars);
        let wrap = |s: String, sum: bool| if sum { format!("({s})") } else { s };
        format!("{}/{}", wrap(n, self.num.is_sum()), wrap(d, true))
    }
    fn is_sum(&self) -> bool {
        self.den.is_one() && self.num.is_sum()
    }
}
