//! Dense univariate polynomials over any [`Ring`].
//!
//! Nesting gives the multivariate rings used throughout: `UPoly<Fq>` is
//! `A = F_q[T]`, `UPoly<UPoly<Fq>>` is `A[y]`, and so on. Every polynomial keeps
//! a zero of its coefficient ring so that contexts survive even for the zero
//! polynomial.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ring::{EuclideanDomain, Field, FqAlgebra, GcdDomain, Ring};

#[derive(Clone, Debug)]
pub struct UPoly<R: Ring> {
    c: Vec<R>,
    zero: R,
}

impl<R: Ring> PartialEq for UPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl<R: Ring> UPoly<R> {
    /// Ascending coefficients; trailing zeros are trimmed.
    pub fn new(coeffs: Vec<R>, zero: R) -> Self {
        let mut p = UPoly {
            c: coeffs,
            zero: zero.zero_like(),
        };
        p.trim();
        p
    }

    /// From coefficients, taking the context from the first one. Panics if empty.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        let zero = coeffs.first().expect("at least one coefficient").zero_like();
        UPoly::new(coeffs, zero)
    }

    pub fn zero(like: &R) -> Self {
        UPoly {
            c: Vec::new(),
            zero: like.zero_like(),
        }
    }

    pub fn constant(c: R) -> Self {
        let zero = c.zero_like();
        UPoly::new(vec![c], zero)
    }

    pub fn one_over(like: &R) -> Self {
        UPoly::constant(like.one_like())
    }

    /// The variable itself.
    pub fn var(like: &R) -> Self {
        UPoly::monomial(like.one_like(), 1)
    }

    pub fn monomial(c: R, n: usize) -> Self {
        let zero = c.zero_like();
        let mut v = vec![zero.clone(); n];
        v.push(c);
        UPoly::new(v, zero)
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, s: &R) -> Self {
        UPoly::new(
            self.c.iter().map(|x| x.clone() * s.clone()).collect(),
            self.zero.clone(),
        )
    }

    pub fn map<S: Ring>(&self, zero: &S, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.c.iter().map(f).collect(), zero.clone())
    }

    pub fn shift(&self, n: usize) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut v = vec![self.zero.clone(); n];
        v.extend(self.c.iter().cloned());
        UPoly {
            c: v,
            zero: self.zero.clone(),
        }
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for c in self.c.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluates at an element of an algebra over the coefficient ring.
    pub fn eval_in<S: Ring>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for c in self.c.iter().rev() {
            acc = acc * x.clone() + embed(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.from_int_like(i as i64) * c.clone())
            .collect();
        UPoly::new(v, self.zero.clone())
    }

    /// `(q, r)` with `self = q·d + r`, `deg r < deg d`, when every leading
    /// coefficient division is exact in `R`.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.lc();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Some((UPoly::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        while r.len() > dd {
            let top = r.last().unwrap().clone();
            let k = r.len() - 1 - dd;
            if !top.is_zero() {
                let t = top.try_div(&lc)?;
                for (i, di) in d.c.iter().enumerate() {
                    r[k + i] = r[k + i].clone() - t.clone() * di.clone();
                }
                q[k] = t;
            }
            r.pop();
        }
        Some((UPoly::new(q, self.zero.clone()), UPoly::new(r, self.zero.clone())))
    }

    /// Pseudo-remainder: `lc(d)^{deg self - deg d + 1}·self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-division by zero");
        if self.deg() < dd as isize {
            return self.clone();
        }
        let lc = d.lc();
        let mut e = self.c.len() - dd;
        let mut r = self.c.clone();
        while r.len() > dd {
            let top = r.pop().expect("nonempty");
            let k = r.len() - dd;
            for x in r.iter_mut() {
                *x = x.clone() * lc.clone();
            }
            if !top.is_zero() {
                for (i, di) in d.c[..dd].iter().enumerate() {
                    r[k + i] = r[k + i].clone() - top.clone() * di.clone();
                }
            }
            e -= 1;
            // a vanishing leading coefficient costs no scaling now; the final
            // power of lc(d) makes up for it
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        let r = UPoly::new(r, self.zero.clone());
        if e == 0 {
            r
        } else {
            r.scale(&lc.pow(e as u64))
        }
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.c.is_empty().then_some(q)
    }
}

impl<R: Ring> Add for UPoly<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (mut long, short) = if self.c.len() >= o.c.len() {
            (self, o)
        } else {
            (o, self)
        };
        for (i, x) in short.c.into_iter().enumerate() {
            long.c[i] = long.c[i].clone() + x;
        }
        long.trim();
        long
    }
}

impl<R: Ring> Neg for UPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        UPoly {
            c: self.c.into_iter().map(|x| -x).collect(),
            zero: self.zero,
        }
    }
}

impl<R: Ring> Sub for UPoly<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<R: Ring> Mul for UPoly<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return UPoly::zero(&self.zero);
        }
        UPoly::new(R::convolve(&self.c, &o.c), self.zero)
    }
}

impl<R: Ring> Ring for UPoly<R> {
    fn zero_like(&self) -> Self {
        UPoly::zero(&self.zero)
    }
    fn one_like(&self) -> Self {
        UPoly::constant(self.zero.one_like())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        UPoly::new(vec![self.zero.from_int_like(n)], self.zero.clone())
    }
    fn characteristic(&self) -> u64 {
        self.zero.characteristic()
    }
    fn const_field_size(&self) -> u64 {
        self.zero.const_field_size()
    }
    /// Coefficients go through their own Frobenius, exponents are scaled by `q^k`.
    fn frobenius(&self, k: u32) -> Self {
        if self.c.len() <= 1 || k == 0 {
            return self.map(&self.zero, |c| c.frobenius(k));
        }
        let q = self.const_field_size();
        assert!(q > 0, "frobenius needs a concrete constant field");
        let step = (q as usize).pow(k);
        let mut v = vec![self.zero.clone(); (self.c.len() - 1) * step + 1];
        for (i, c) in self.c.iter().enumerate() {
            v[i * step] = c.frobenius(k);
        }
        UPoly::new(v, self.zero.clone())
    }
    fn try_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        self.exact_div(d)
    }
}

impl<R: GcdDomain> UPoly<R> {
    /// Normalized gcd of the coefficients.
    pub fn content(&self) -> R {
        let mut g = self.zero.clone();
        for c in &self.c {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.map(&self.zero, |x| x.try_div(&c).expect("content divides"))
    }

    /// Primitive part with a normalized leading coefficient.
    pub fn primitive_normalized(&self) -> Self {
        self.primitive_part().normalized()
    }

    /// Resultant with respect to the variable, by the subresultant PRS.
    pub fn resultant(&self, other: &Self) -> R {
        let zero = self.zero.clone();
        if self.is_zero() || other.is_zero() {
            return zero;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut negate = false;
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                negate = true;
            }
        }
        let sign = |x: R, neg: bool| if neg { -x } else { x };
        if b.deg() == 0 {
            return sign(b.lc().pow(a.deg() as u64), negate);
        }
        let one = zero.one_like();
        let mut g = one.clone();
        let mut h = one;
        loop {
            let delta = (a.deg() - b.deg()) as u64;
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                negate = !negate;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            if r.is_zero() {
                return zero;
            }
            let div = g.clone() * h.pow(delta);
            b = r.map(&zero, |c| c.try_div(&div).expect("subresultant division is exact"));
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                g.pow(delta)
                    .try_div(&h.pow(delta - 1))
                    .expect("subresultant division is exact")
            };
            if b.deg() == 0 {
                let n = a.deg() as u64;
                let num = b.lc().pow(n);
                let res = if n == 0 {
                    num
                } else {
                    num.try_div(&h.pow(n - 1)).expect("subresultant division is exact")
                };
                return sign(res, negate);
            }
        }
    }

    /// Product of the distinct irreducible factors over the fraction field of
    /// `R`, returned primitive and normalized.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("squarefree part of zero"));
        }
        let f = self.primitive_normalized();
        if f.deg() <= 0 {
            return Ok(f.one_like());
        }
        let d = f.derivative();
        if d.is_zero() {
            let root = f.pth_root().ok_or_else(|| {
                Error::InseparableInput(format!(
                    "derivative vanishes and coefficients are not {}-th powers",
                    f.characteristic()
                ))
            })?;
            return root.squarefree_part();
        }
        let g = f.gcd(&d);
        let c = f.exact_div(&g).expect("gcd divides").primitive_normalized();
        let mut w = g;
        loop {
            let y = w.gcd(&c);
            if y.deg() <= 0 {
                break;
            }
            w = w.exact_div(&y).expect("gcd divides");
        }
        if w.deg() <= 0 {
            return Ok(c);
        }
        let root = w
            .pth_root()
            .ok_or_else(|| Error::InseparableInput("repeated factor is not a p-th power".into()))?;
        Ok((c * root.squarefree_part()?).primitive_normalized())
    }
}

impl<R: GcdDomain> GcdDomain for UPoly<R> {
    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_normalized() };
        }
        (a.primitive_part().scale(&cont)).normalized()
    }

    fn unit_part(&self) -> Self {
        if self.is_zero() {
            return self.one_like();
        }
        UPoly::constant(self.lc().unit_part())
    }

    fn pth_root(&self) -> Option<Self> {
        let p = self.characteristic() as usize;
        if p == 0 {
            return None;
        }
        let mut v = Vec::with_capacity(self.c.len() / p + 1);
        for (i, c) in self.c.iter().enumerate() {
            if i % p == 0 {
                v.push(c.pth_root()?);
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(UPoly::new(v, self.zero.clone()))
    }
}

impl<R: Field + GcdDomain> EuclideanDomain for UPoly<R> {
    fn euclid_degree(&self) -> Option<usize> {
        self.degree()
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        UPoly::div_rem(self, d).expect("division by a nonzero polynomial over a field")
    }
}

impl<R: Field> UPoly<R> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let zero = UPoly::zero(&self.zero);
        let one = self.one_like();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = UPoly::div_rem(&r0, &r1).expect("field division");
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0 - q.clone() * s1.clone();
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0 - q * t1.clone();
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = UPoly::constant(r0.lc().inv().expect("nonzero"));
        (r0 * inv.clone(), s0 * inv.clone(), t0 * inv)
    }
}

impl<R: FqAlgebra> FqAlgebra for UPoly<R> {
    fn embed(&self, c: &Fq) -> Self {
        UPoly::constant(self.zero.embed(c))
    }
}

/// Rendering with caller-chosen variable names, outermost first.
pub trait Pretty {
    fn pretty(&self, vars: &[&str]) -> String;
    /// Whether the rendering is a sum and needs parentheses inside a product.
    fn is_sum(&self) -> bool;
}

impl Pretty for Fq {
    fn pretty(&self, _vars: &[&str]) -> String {
        format!("{self}")
    }
    /// Sums in `z` are already parenthesized by `Display`.
    fn is_sum(&self) -> bool {
        false
    }
}

impl<R: Ring + Pretty> Pretty for UPoly<R> {
    fn pretty(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (v, rest) = vars.split_first().expect("variable name for each level");
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{i}"),
            };
            let cs = c.pretty(rest);
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if c.is_sum() {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join(" + ")
    }
    fn is_sum(&self) -> bool {
        self.c.iter().filter(|c| !c.is_zero()).count() > 1 || self.c.last().is_some_and(|c| c.is_sum())
    }
}
