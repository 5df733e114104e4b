//! Residue rings `K[y]/(m)` over a field `K`, with Frobenius `x ↦ x^{q^k}`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::frac::Frac;
use crate::poly::{Pretty, UPoly};
use crate::ring::{Field, FqAlgebra, GcdDomain, Ring};
use crate::{BiPoly, FqT};

#[derive(Clone, Debug)]
pub struct QuotElem<K: Field> {
    v: UPoly<K>,
    m: Arc<UPoly<K>>,
}

impl<K: Field> PartialEq for QuotElem<K> {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v && (Arc::ptr_eq(&self.m, &o.m) || self.m == o.m)
    }
}

impl<K: Field> QuotElem<K> {
    /// Residue of `v` modulo `m`; `m` is made monic. Fails if `m` is constant.
    pub fn new(v: UPoly<K>, m: Arc<UPoly<K>>) -> Result<Self> {
        if m.deg() < 1 {
            return Err(Error::invalid("modulus must have positive degree"));
        }
        let m = if m.lc().is_one() { m } else { Arc::new(m.monic()) };
        Ok(QuotElem::reduced(v, m))
    }

    fn reduced(v: UPoly<K>, m: Arc<UPoly<K>>) -> Self {
        let v = if v.deg() >= m.deg() {
            v.div_rem(&m).expect("monic modulus").1
        } else {
            v
        };
        QuotElem { v, m }
    }

    pub fn modulus(&self) -> &Arc<UPoly<K>> {
        &self.m
    }

    pub fn lift(&self) -> &UPoly<K> {
        &self.v
    }

    /// The class of the variable.
    pub fn generator(m: Arc<UPoly<K>>) -> Result<Self> {
        let one = m.lc().one_like();
        QuotElem::new(UPoly::var(&one), m)
    }

    pub fn from_base(&self, c: K) -> Self {
        QuotElem::reduced(UPoly::constant(c), self.m.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let (g, s, _) = self.v.ext_gcd(&self.m);
        if g.deg() != 0 {
            return Err(Error::NonInvertibleDenominator);
        }
        Ok(QuotElem::reduced(s, self.m.clone()))
    }

    /// Square-and-multiply with a big exponent given as `q^k`.
    fn pow_q(&self, q: u64, k: u32) -> Self {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.pow(q);
        }
        x
    }
}

impl<K: Field> Add for QuotElem<K> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuotElem {
            v: self.v + o.v,
            m: self.m,
        }
    }
}

impl<K: Field> Sub for QuotElem<K> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuotElem {
            v: self.v - o.v,
            m: self.m,
        }
    }
}

impl<K: Field> Neg for QuotElem<K> {
    type Output = Self;
    fn neg(self) -> Self {
        QuotElem { v: -self.v, m: self.m }
    }
}

impl<K: Field> Mul for QuotElem<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        QuotElem::reduced(self.v * o.v, self.m)
    }
}

impl<K: Field> Ring for QuotElem<K> {
    fn zero_like(&self) -> Self {
        QuotElem {
            v: self.v.zero_like(),
            m: self.m.clone(),
        }
    }
    fn one_like(&self) -> Self {
        QuotElem {
            v: self.v.one_like(),
            m: self.m.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn is_one(&self) -> bool {
        self.v.is_one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuotElem::reduced(self.v.from_int_like(n), self.m.clone())
    }
    fn characteristic(&self) -> u64 {
        self.m.characteristic()
    }
    fn const_field_size(&self) -> u64 {
        self.m.const_field_size()
    }
    fn frobenius(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let q = self.const_field_size();
        let y = QuotElem::generator(self.m.clone()).expect("positive degree");
        let yq = y.pow_q(q, k);
        let mut acc = self.zero_like();
        for c in self.v.coeffs().iter().rev() {
            acc = acc * yq.clone() + self.from_base(c.frobenius(k));
        }
        acc
    }
    fn try_div(&self, d: &Self) -> Option<Self> {
        Some(self.clone() * d.inverse().ok()?)
    }
}

impl<K: Field + FqAlgebra> FqAlgebra for QuotElem<K> {
    fn embed(&self, c: &Fq) -> Self {
        self.from_base(self.m.lc().embed(c))
    }
}

impl<K: Field + Pretty> Pretty for QuotElem<K> {
    fn pretty(&self, vars: &[&str]) -> String {
        self.v.pretty(vars)
    }
    fn is_sum(&self) -> bool {
        self.v.is_sum()
    }
}

/// `F_q(T)[y]/(m)`.
pub type FqTQuot = QuotElem<FqT>;

/// Moves a polynomial of `A[y]` into `F_q(T)[y]`.
pub fn bipoly_over_fqt(f: &BiPoly) -> UPoly<FqT> {
    let zero = Frac::from_ring(f.coeff_zero().clone());
    f.map(&zero, |c| Frac::from_ring(c.clone()))
}

impl FqTQuot {
    /// Class of `N(y)/D(y)`; the denominator must be a unit modulo `m`.
    pub fn from_ratfunc(f: &Frac<BiPoly>, m: &Arc<UPoly<FqT>>) -> Result<Self> {
        let n = QuotElem::new(bipoly_over_fqt(f.num()), m.clone())?;
        let d = QuotElem::new(bipoly_over_fqt(f.den()), m.clone())?;
        Ok(n * d.inverse()?)
    }

    /// Modulus given in `A[y]`.
    pub fn modulus_from(m: &BiPoly) -> Result<Arc<UPoly<FqT>>> {
        let m = bipoly_over_fqt(m);
        if m.deg() < 1 {
            return Err(Error::invalid("modulus must have positive degree"));
        }
        Ok(Arc::new(m.monic()))
    }
}

impl<K: Field + GcdDomain> QuotElem<K> {
    /// Whether the modulus is squarefree (needed for the residue ring to be reduced).
    pub fn modulus_is_squarefree(&self) -> bool {
        self.m.gcd(&self.m.derivative()).deg() == 0
    }
}
