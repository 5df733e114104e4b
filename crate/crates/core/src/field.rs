//! The constant field `F_q = F_p[z]/(m(z))`.
//!
//! Elements are encoded as integers `Σ c_i p^i` over the coefficient vector of
//! their residue mod `m`. Multiplication goes through discrete log tables built
//! once per context, addition works digit by digit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{EuclideanDomain, Field, FqAlgebra, GcdDomain, Ring};

/// Largest field size for which log tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Sparse irreducibles `z^e + a z + b` for small `(p, e)`, as `(p, e, a, b)`.
const BUILTIN_MODULI: &[(u32, u32, u32, u32)] = &[
    (2, 2, 1, 1),
    (2, 3, 1, 1),
    (2, 4, 1, 1),
    (3, 2, 1, 2),
    (3, 3, 2, 1),
    (3, 4, 1, 2),
    (5, 2, 1, 1),
    (5, 3, 1, 1),
    (5, 4, 1, 4),
    (7, 2, 1, 3),
    (7, 3, 1, 1),
    (7, 4, 1, 1),
    (11, 2, 1, 1),
    (11, 3, 1, 4),
    (11, 4, 1, 2),
    (13, 2, 1, 2),
    (13, 3, 1, 5),
    (13, 4, 1, 1),
];

pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients of the monic modulus, length `e + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Splits `q = p^e` with `p` prime; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    for e in (1..=63u32).rev() {
        let r = integer_root(q, e);
        if r >= 2 && r.checked_pow(e) == Some(q) && is_prime_u64(r) {
            return Some((r, e));
        }
    }
    None
}

fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Polynomial remainder over `F_p`, ascending coefficient vectors.
fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    let inv_lc = fp_inv(m[dm], p);
    while a.len() > dm {
        let top = *a.last().unwrap();
        if top != 0 {
            let c = (top as u64 * inv_lc as u64 % p as u64) as u32;
            let shift = a.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        }
        a.pop();
    }
    a
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    if d <= 1 {
        return d == 1;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut t = idx;
            for _ in 0..k {
                f.push((t % p as u64) as u32);
                t /= p as u64;
            }
            f.push(1);
            if fp_poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds `F_{p^e}`. Without an explicit modulus the built-in table is used
    /// (or `z` when `e = 1`).
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Arc<FieldCtx>> {
        if !is_prime_u64(p as u64) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::invalid("extension degree must be positive"));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::TooLarge(format!("field size {p}^{e}")))?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] % p != 1 {
                    return Err(Error::invalid(format!("modulus must be monic of degree {e}")));
                }
                let m: Vec<u32> = m.iter().map(|c| c % p).collect();
                if !fp_is_irreducible(&m, p) {
                    return Err(Error::invalid("modulus is reducible over F_p"));
                }
                m
            }
            None if e == 1 => vec![0, 1],
            None => {
                let &(_, _, a, b) = BUILTIN_MODULI
                    .iter()
                    .find(|t| t.0 == p && t.1 == e)
                    .ok_or_else(|| Error::invalid(format!("no built-in modulus for p={p}, e={e}; supply one")))?;
                let mut m = vec![0; e as usize + 1];
                m[0] = b;
                m[1] = a;
                m[e as usize] = 1;
                m
            }
        };
        let mut ctx = FieldCtx {
            p,
            e,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_tables()?;
        Ok(Arc::new(ctx))
    }

    pub fn prime(p: u32) -> Result<Arc<FieldCtx>> {
        FieldCtx::new(p, 1, None)
    }

    /// `F_q` with the built-in modulus.
    pub fn of_size(q: u64) -> Result<Arc<FieldCtx>> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        if p > u32::MAX as u64 {
            return Err(Error::TooLarge(format!("characteristic {p}")));
        }
        FieldCtx::new(p as u32, e, None)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        'cand: for g in 1..q {
            let mut x = 1u32;
            for i in 0..order {
                if i > 0 && x == 1 {
                    continue 'cand;
                }
                exp[i as usize] = x;
                x = self.slow_mul(x, g);
            }
            if x != 1 {
                return Err(Error::invalid("modulus does not define a field"));
            }
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            self.exp = exp;
            self.log = log;
            return Ok(());
        }
        Err(Error::invalid("no primitive element found"))
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let r = fp_poly_rem(&prod, &self.modulus, self.p);
        self.encode(&r)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order as u64;
        self.exp[l as usize]
    }
}

/// An element of `F_q`.
#[derive(Clone)]
pub struct Fq {
    v: u32,
    ctx: Arc<FieldCtx>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.e == 1 {
            return write!(f, "{}", self.v);
        }
        let d = self.ctx.digits(self.v);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join("+"))
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl Fq {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Fq {
        Fq { v: 0, ctx: ctx.clone() }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Fq {
        Fq { v: 1, ctx: ctx.clone() }
    }

    pub fn from_int(ctx: &Arc<FieldCtx>, n: i64) -> Fq {
        let p = ctx.p as i64;
        Fq {
            v: n.rem_euclid(p) as u32,
            ctx: ctx.clone(),
        }
    }

    /// From coefficients over `F_p` in the basis `1, z, …, z^{e-1}`.
    pub fn from_coeffs(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Result<Fq> {
        if coeffs.len() > ctx.e as usize {
            return Err(Error::invalid("too many coefficients for field element"));
        }
        let d: Vec<u32> = (0..ctx.e as usize)
            .map(|i| coeffs.get(i).copied().unwrap_or(0).rem_euclid(ctx.p as i64) as u32)
            .collect();
        Ok(Fq {
            v: ctx.encode(&d),
            ctx: ctx.clone(),
        })
    }

    /// Element with integer encoding `v` (digits base `p`), `v < q`.
    pub fn from_index(ctx: &Arc<FieldCtx>, v: u64) -> Fq {
        assert!(v < ctx.q as u64, "index out of range");
        Fq {
            v: v as u32,
            ctx: ctx.clone(),
        }
    }

    /// The fixed multiplicative generator `ω` of `F_q^*`.
    pub fn primitive(ctx: &Arc<FieldCtx>) -> Fq {
        Fq {
            v: ctx.exp.get(1).copied().unwrap_or(1),
            ctx: ctx.clone(),
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn index(&self) -> u64 {
        self.v as u64
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.ctx.digits(self.v)
    }

    pub fn elements(ctx: &Arc<FieldCtx>) -> impl Iterator<Item = Fq> + '_ {
        (0..ctx.q).map(move |v| Fq { v, ctx: ctx.clone() })
    }

    /// Nonzero elements in the order `1, ω, ω², …` for the fixed generator `ω`.
    pub fn units_by_generator(ctx: &Arc<FieldCtx>) -> Vec<Fq> {
        ctx.exp.iter().map(|&v| Fq { v, ctx: ctx.clone() }).collect()
    }

    fn same_ctx(&self, o: &Fq) -> bool {
        Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx
    }

    fn assert_ctx(&self, o: &Fq) {
        assert!(self.same_ctx(o), "field context mismatch");
    }

    pub fn checked_add(&self, o: &Fq) -> Result<Fq> {
        if !self.same_ctx(o) {
            return Err(Error::ContextMismatch);
        }
        Ok(Fq {
            v: self.ctx.add_raw(self.v, o.v),
            ctx: self.ctx.clone(),
        })
    }

    pub fn checked_mul(&self, o: &Fq) -> Result<Fq> {
        if !self.same_ctx(o) {
            return Err(Error::ContextMismatch);
        }
        Ok(Fq {
            v: self.ctx.mul_raw(self.v, o.v),
            ctx: self.ctx.clone(),
        })
    }

    pub fn inverse(&self) -> Result<Fq> {
        if self.v == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.ctx.q - 1;
        let l = self.ctx.log[self.v as usize];
        Ok(Fq {
            v: self.ctx.exp[((order - l) % order) as usize],
            ctx: self.ctx.clone(),
        })
    }

    pub fn pow_u64(&self, n: u64) -> Fq {
        if n == 0 {
            return Fq::one(&self.ctx);
        }
        if self.v == 0 {
            return self.clone();
        }
        let order = (self.ctx.q - 1) as u128;
        let l = (self.ctx.log[self.v as usize] as u128 * (n as u128 % order)) % order;
        Fq {
            v: self.ctx.exp[l as usize],
            ctx: self.ctx.clone(),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self) -> Option<u64> {
        if self.v == 0 {
            return None;
        }
        let n = (self.ctx.q - 1) as u64;
        let l = self.ctx.log[self.v as usize] as u64;
        Some(n / gcd_u64(n, l))
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, o: Fq) -> Fq {
        self.assert_ctx(&o);
        Fq {
            v: self.ctx.add_raw(self.v, o.v),
            ctx: self.ctx,
        }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, o: Fq) -> Fq {
        self.assert_ctx(&o);
        let n = self.ctx.neg_raw(o.v);
        Fq {
            v: self.ctx.add_raw(self.v, n),
            ctx: self.ctx,
        }
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, o: Fq) -> Fq {
        self.assert_ctx(&o);
        Fq {
            v: self.ctx.mul_raw(self.v, o.v),
            ctx: self.ctx,
        }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq {
            v: self.ctx.neg_raw(self.v),
            ctx: self.ctx,
        }
    }
}

impl<'a> Add<&'a Fq> for &'a Fq {
    type Output = Fq;
    fn add(self, o: &Fq) -> Fq {
        self.clone() + o.clone()
    }
}

impl<'a> Mul<&'a Fq> for &'a Fq {
    type Output = Fq;
    fn mul(self, o: &Fq) -> Fq {
        self.clone() * o.clone()
    }
}

impl Ring for Fq {
    fn zero_like(&self) -> Self {
        Fq::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Fq::one(&self.ctx)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn from_int_like(&self, n: i64) -> Self {
        Fq::from_int(&self.ctx, n)
    }
    fn characteristic(&self) -> u64 {
        self.ctx.p as u64
    }
    fn const_field_size(&self) -> u64 {
        self.ctx.q as u64
    }
    fn frobenius(&self, _k: u32) -> Self {
        self.clone()
    }
    fn try_div(&self, d: &Self) -> Option<Self> {
        d.inverse().ok().map(|i| self.clone() * i)
    }
    fn pow(&self, n: u64) -> Self {
        self.pow_u64(n)
    }
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let ctx = &a[0].ctx;
        let n = a.len() + b.len() - 1;
        let raw: Vec<u32> = if ctx.e == 1 {
            let p = ctx.p as u64;
            // accumulate products of residues < p; reduce before overflow
            let cap = (u64::MAX / ((p - 1) * (p - 1)).max(1)).min(1 << 20) as usize;
            let mut acc = vec![0u64; n];
            for (i, x) in a.iter().enumerate() {
                let x = x.v as u64;
                if x == 0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    acc[i + j] += x * y.v as u64;
                }
                if (i + 1) % cap == 0 {
                    acc.iter_mut().for_each(|v| *v %= p);
                }
            }
            acc.into_iter().map(|v| (v % p) as u32).collect()
        } else {
            let mut acc = vec![0u32; n];
            for (i, x) in a.iter().enumerate() {
                if x.v == 0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if y.v != 0 {
                        acc[i + j] = ctx.add_raw(acc[i + j], ctx.mul_raw(x.v, y.v));
                    }
                }
            }
            acc
        };
        raw.into_iter().map(|v| Fq { v, ctx: ctx.clone() }).collect()
    }
}

impl Field for Fq {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl GcdDomain for Fq {
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
        // x ↦ x^p is a bijection with inverse x ↦ x^{q/p}.
        Some(self.pow_u64(self.ctx.q as u64 / self.ctx.p as u64))
    }
}

impl EuclideanDomain for Fq {
    fn euclid_degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let inv = d.inverse().expect("division by zero");
        (self.clone() * inv, self.zero_like())
    }
}

impl FqAlgebra for Fq {
    fn embed(&self, c: &Fq) -> Self {
        c.clone()
    }
}

/// Operation selector for [`field_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

/// Single entry point for the field operations, with checked errors.
pub fn field_suite(op: FieldOp, x: &Fq, y: Option<&Fq>) -> Result<Fq> {
    let need_y = || y.ok_or_else(|| Error::invalid("binary operation needs two operands"));
    match op {
        FieldOp::Add => x.checked_add(need_y()?),
        FieldOp::Mul => x.checked_mul(need_y()?),
        FieldOp::Neg => Ok(-x.clone()),
        FieldOp::Inv => x.inverse(),
        FieldOp::Pow(n) => Ok(x.pow_u64(n)),
    }
}
