//! Coefficient-ring abstraction shared by every polynomial type in the crate.
//!
//! Elements carry their own context (the finite field they live over), so
//! `zero_like`/`one_like` take a receiver instead of being associated
//! constants. The Frobenius map is part of the contract because the twisted
//! polynomial engine needs `c ↦ c^{q^k}` on whatever ring it runs over.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Fq;

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Image of the integer `n` under `Z -> R`.
    #[allow(clippy::wrong_self_convention)]
    fn from_int_like(&self, n: i64) -> Self;

    /// Characteristic of the ring, `0` when it is not fixed (symbolic rings).
    fn characteristic(&self) -> u64;

    /// Size `q` of the constant field, `0` when it is symbolic.
    fn const_field_size(&self) -> u64;

    /// `x ↦ x^{q^k}` where `q` is the size of the constant field.
    fn frobenius(&self, k: u32) -> Self;

    /// Exact quotient `self / d`, if it exists in the ring.
    fn try_div(&self, d: &Self) -> Option<Self>;

    /// Coefficients of the product of two dense polynomials, both nonempty.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut v = vec![a[0].zero_like(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] = v[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        v
    }

    fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Integral domains with gcds and a choice of normal form modulo units.
pub trait GcdDomain: Ring {
    /// Normalized gcd; `gcd(0, 0) = 0`.
    fn gcd(&self, other: &Self) -> Self;

    /// The unit `u` with `self = u * normal(self)`; the unit part of zero is one.
    fn unit_part(&self) -> Self;

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.try_div(&self.unit_part()).expect("unit part always divides")
    }

    fn is_unit(&self) -> bool {
        !self.is_zero() && self.normalized().is_one()
    }

    /// `p`-th root where `p` is the characteristic, if the element is a `p`-th power.
    fn pth_root(&self) -> Option<Self>;
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

/// Euclidean domains with a degree function (used by Smith/Hermite forms).
pub trait EuclideanDomain: GcdDomain {
    /// `None` for zero.
    fn euclid_degree(&self) -> Option<usize>;
    fn div_rem(&self, d: &Self) -> (Self, Self);
}

/// Rings containing the constant field `F_q`.
pub trait FqAlgebra: Ring {
    fn embed(&self, c: &Fq) -> Self;
}
