//! Sparse multivariate polynomials over `F_q` with named variables.
//!
//! This is the interchange type: parsing, canonical JSON, and the bridge to
//! the nested dense representation that the algorithms run on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq};
use crate::poly::UPoly;
use crate::ring::{GcdDomain, Ring};

/// Dense nested polynomial types, outermost variable first.
pub trait Nest: Ring {
    const DEPTH: usize;
    fn from_terms(terms: &[(Vec<u32>, Fq)], ctx: &Arc<FieldCtx>) -> Self;
    fn to_terms(&self) -> Vec<(Vec<u32>, Fq)>;
}

impl Nest for Fq {
    const DEPTH: usize = 0;
    fn from_terms(terms: &[(Vec<u32>, Fq)], ctx: &Arc<FieldCtx>) -> Self {
        terms.iter().fold(Fq::zero(ctx), |a, (_, c)| a + c.clone())
    }
    fn to_terms(&self) -> Vec<(Vec<u32>, Fq)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(Vec::new(), self.clone())]
        }
    }
}

impl<R: Nest> Nest for UPoly<R> {
    const DEPTH: usize = R::DEPTH + 1;
    fn from_terms(terms: &[(Vec<u32>, Fq)], ctx: &Arc<FieldCtx>) -> Self {
        let zero = R::from_terms(&[], ctx);
        let mut groups: BTreeMap<u32, Vec<(Vec<u32>, Fq)>> = BTreeMap::new();
        for (e, c) in terms {
            groups.entry(e[0]).or_default().push((e[1..].to_vec(), c.clone()));
        }
        let n = groups.keys().next_back().map_or(0, |&d| d as usize + 1);
        let mut v = vec![zero.clone(); n];
        for (d, g) in groups {
            v[d as usize] = R::from_terms(&g, ctx);
        }
        UPoly::new(v, zero)
    }
    fn to_terms(&self) -> Vec<(Vec<u32>, Fq)> {
        let mut out = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            for (mut e, x) in c.to_terms() {
                e.insert(0, i as u32);
                out.push((e, x));
            }
        }
        out
    }
}

/// `F_q[T]`, `F_q[X][T]`, and `F_q[X][Y][T]` shapes used by the bridge.
pub type N1 = UPoly<Fq>;
pub type N2 = UPoly<N1>;
pub type N3 = UPoly<N2>;

#[derive(Clone, Debug)]
pub struct MPoly {
    ctx: Arc<FieldCtx>,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Fq>,
}

impl PartialEq for MPoly {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars && self.terms == o.terms && *self.ctx == *o.ctx
    }
}

/// Graded lexicographic comparison.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero(ctx: &Arc<FieldCtx>, vars: Vec<&str>) -> Self {
        MPoly {
            ctx: ctx.clone(),
            vars: vars.into_iter().map(String::from).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, vars: Vec<&str>, c: Fq) -> Self {
        let mut p = MPoly::zero(ctx, vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(ctx: &Arc<FieldCtx>, vars: Vec<&str>, name: &str) -> Result<Self> {
        let mut p = MPoly::zero(ctx, vars);
        let i = p.var_index(name)?;
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.add_term(e, Fq::one(ctx));
        Ok(p)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::invalid(format!("unknown variable {name}")))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Fq) {
        assert_eq!(e.len(), self.vars.len(), "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> Vec<(&Vec<u32>, &Fq)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex(b.0, a.0));
        t
    }

    pub fn coeff(&self, e: &[u32]) -> Fq {
        self.terms.get(e).cloned().unwrap_or_else(|| Fq::zero(&self.ctx))
    }

    pub fn degree_in(&self, var: &str) -> Result<Option<u32>> {
        let i = self.var_index(var)?;
        Ok(self.terms.keys().map(|e| e[i]).max())
    }

    /// Same polynomial over a different (superset) variable list.
    pub fn with_vars(&self, vars: Vec<&str>) -> Result<Self> {
        let mut out = MPoly::zero(&self.ctx, vars);
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| out.vars.iter().position(|w| w == v)).collect();
        for (e, c) in &self.terms {
            let mut ne = vec![0; out.vars.len()];
            for (i, &x) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = x,
                    None if x == 0 => {}
                    None => return Err(Error::invalid(format!("variable {} is not kept", self.vars[i]))),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Converts to a nested dense polynomial with the listed variables,
    /// outermost first. Variables not listed must not occur.
    pub fn to_nested<N: Nest>(&self, order: &[&str]) -> Result<N> {
        assert_eq!(order.len(), N::DEPTH, "nesting depth");
        let idx = order.iter().map(|v| self.var_index(v)).collect::<Result<Vec<_>>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| x > 0 && !idx.contains(&i)) {
                return Err(Error::invalid("polynomial involves an unlisted variable"));
            }
            terms.push((idx.iter().map(|&i| e[i]).collect(), c.clone()));
        }
        Ok(N::from_terms(&terms, &self.ctx))
    }

    pub fn from_nested<N: Nest>(f: &N, ctx: &Arc<FieldCtx>, order: &[&str], vars: Vec<&str>) -> Result<Self> {
        let mut out = MPoly::zero(ctx, vars);
        let idx = order.iter().map(|v| out.var_index(v)).collect::<Result<Vec<_>>>()?;
        for (e, c) in f.to_terms() {
            let mut ne = vec![0; out.vars.len()];
            for (k, &i) in idx.iter().enumerate() {
                ne[i] = e[k];
            }
            out.add_term(ne, c);
        }
        Ok(out)
    }

    /// Renames a variable.
    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let i = self.var_index(from)?;
        let mut out = self.clone();
        out.vars[i] = to.to_string();
        Ok(out)
    }

    /// Canonical JSON with terms in descending graded-lex order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|(e, c)| json!({"c": c.coeffs(), "e": e}))
            .collect();
        json!({
            "field": field_json(&self.ctx),
            "vars": self.vars,
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ctx = field_from_json(v.get("field").ok_or_else(|| perr("missing field"))?)?;
        Self::from_json_in(v, &ctx)
    }

    /// Parses the terms of a polynomial JSON object inside a known field.
    pub fn from_json_in(v: &Value, ctx: &Arc<FieldCtx>) -> Result<Self> {
        if let Some(f) = v.get("field") {
            if *field_from_json(f)? != **ctx {
                return Err(Error::ContextMismatch);
            }
        }
        let vars: Vec<String> = serde_json::from_value(v.get("vars").cloned().ok_or_else(|| perr("missing vars"))?)
            .map_err(|e| perr(&e.to_string()))?;
        let mut out = MPoly::zero(ctx, vars.iter().map(String::as_str).collect());
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("missing terms"))?;
        for t in terms {
            let c: Vec<i64> =
                serde_json::from_value(t.get("c").cloned().unwrap_or(Value::Null)).map_err(|e| perr(&e.to_string()))?;
            let e: Vec<u32> =
                serde_json::from_value(t.get("e").cloned().unwrap_or(Value::Null)).map_err(|e| perr(&e.to_string()))?;
            if e.len() != vars.len() {
                return Err(perr("exponent length differs from variable count"));
            }
            out.add_term(e, Fq::from_coeffs(ctx, &c)?);
        }
        Ok(out)
    }

    /// Parses `+ - * ^ ( )` expressions over the given variables. Integers are
    /// read mod `p`; `z` names the field generator when `e > 1` and `z` is not
    /// a variable.
    pub fn parse(s: &str, ctx: &Arc<FieldCtx>, vars: Vec<&str>) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            i: 0,
            ctx,
            vars: &vars,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(perr(&format!("unexpected input at offset {}", p.i)));
        }
        Ok(out)
    }

    fn like(&self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let one = MPoly::constant(
            &self.ctx,
            self.vars.iter().map(String::as_str).collect(),
            Fq::one(&self.ctx),
        );
        (0..n).fold(one, |a, _| a * self.clone())
    }

    /// `f ↦ f^{q^k}` by exponent scaling.
    pub fn frobenius(&self, k: u32) -> Result<Self> {
        let s = self
            .ctx
            .q()
            .checked_pow(k)
            .and_then(|s| u32::try_from(s).ok())
            .ok_or_else(|| Error::TooLarge("Frobenius exponent".into()))?;
        let mut out = self.like();
        for (e, c) in &self.terms {
            let ne = e
                .iter()
                .map(|&x| x.checked_mul(s).ok_or_else(|| Error::TooLarge("exponent".into())))
                .collect::<Result<Vec<_>>>()?;
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }
}

fn perr(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

pub fn field_json(ctx: &FieldCtx) -> Value {
    json!({"p": ctx.p(), "e": ctx.e(), "modulus": ctx.modulus()})
}

pub fn field_from_json(v: &Value) -> Result<Arc<FieldCtx>> {
    let get = |k: &str| {
        v.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| perr(&format!("field.{k}")))
    };
    let p = u32::try_from(get("p")?).map_err(|_| perr("field.p"))?;
    let e = u32::try_from(get("e")?).map_err(|_| perr("field.e"))?;
    let m: Option<Vec<u32>> = match v.get("modulus") {
        Some(m) => Some(serde_json::from_value(m.clone()).map_err(|e| perr(&e.to_string()))?),
        None => None,
    };
    FieldCtx::new(p, e, m)
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mut fs = Vec::new();
            for (v, &x) in self.vars.iter().zip(e) {
                match x {
                    0 => {}
                    1 => fs.push(v.clone()),
                    _ => fs.push(format!("{v}^{x}")),
                }
            }
            let mono = fs.join("*");
            parts.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => mono,
                (false, false) => format!("{c}*{mono}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Add for MPoly {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable lists differ");
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for MPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for MPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.vars, o.vars, "variable lists differ");
        let mut out = self.like();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    ctx: &'a Arc<FieldCtx>,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn zero(&self) -> MPoly {
        MPoly::zero(self.ctx, self.vars.to_vec())
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.zero();
        let mut neg = false;
        if let Some(c @ (b'-' | b'+')) = self.peek() {
            neg = c == b'-';
            self.i += 1;
        }
        loop {
            let t = self.term()?;
            acc = if neg { acc - t } else { acc + t };
            match self.peek() {
                Some(c @ (b'+' | b'-')) => {
                    neg = c == b'-';
                    self.i += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = acc * self.factor()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc * self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.skip_ws();
            let n = self.number()?;
            let n = u32::try_from(n).map_err(|_| perr("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        let st = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[st..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| perr(&format!("expected a number at offset {st}")))
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(perr("missing ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let c = Fq::from_int(self.ctx, (n % self.ctx.p() as u64) as i64);
                Ok(MPoly::constant(self.ctx, self.vars.to_vec(), c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let st = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[st..self.i]).expect("ascii");
                if self.vars.contains(&name) {
                    return MPoly::var(self.ctx, self.vars.to_vec(), name);
                }
                if name == "z" && self.ctx.e() > 1 {
                    let z = Fq::from_coeffs(self.ctx, &[0, 1])?;
                    return Ok(MPoly::constant(self.ctx, self.vars.to_vec(), z));
                }
                Err(perr(&format!("unknown symbol {name}")))
            }
            _ => Err(perr(&format!("unexpected input at offset {}", self.i))),
        }
    }
}

/// Monic in the main variable when the leading coefficient is a constant,
/// otherwise primitive with a normalized leading coefficient.
fn normalize_main<R: GcdDomain>(f: UPoly<R>) -> UPoly<R> {
    f.primitive_normalized()
}

fn others<'a>(f: &'a MPoly, main: &str) -> Result<Vec<&'a str>> {
    f.var_index(main)?;
    Ok(f.vars
        .iter()
        .filter(|v| v.as_str() != main)
        .map(String::as_str)
        .filter(|v| f.degree_in(v).ok().flatten().unwrap_or(0) > 0)
        .collect())
}

fn order_with<'a>(main: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut o = vec![main];
    o.extend_from_slice(rest);
    o
}

macro_rules! dispatch {
    ($f:expr, $g:expr, $main:expr, |$a:ident, $b:ident, $order:ident| $body:expr) => {{
        let mut rest = others($f, $main)?;
        for v in others($g, $main)? {
            if !rest.contains(&v) {
                rest.push(v);
            }
        }
        rest.sort_by_key(|v| $f.var_index(v).unwrap_or(usize::MAX));
        let $order = order_with($main, &rest);
        match rest.len() {
            0 => {
                let $a: N1 = $f.to_nested(&$order)?;
                let $b: N1 = $g.to_nested(&$order)?;
                $body
            }
            1 => {
                let $a: N2 = $f.to_nested(&$order)?;
                let $b: N2 = $g.to_nested(&$order)?;
                $body
            }
            2 => {
                let $a: N3 = $f.to_nested(&$order)?;
                let $b: N3 = $g.to_nested(&$order)?;
                $body
            }
            _ => Err(Error::TooLarge("at most two variables besides the main one".into())),
        }
    }};
}

fn vars_of(f: &MPoly) -> Vec<&str> {
    f.vars.iter().map(String::as_str).collect()
}

/// Gcd in the main variable over the fraction field of the others.
pub fn poly_gcd(f: &MPoly, g: &MPoly, main: &str) -> Result<MPoly> {
    if f.vars != g.vars {
        return Err(Error::ContextMismatch);
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    dispatch!(f, g, main, |a, b, order| {
        let h = normalize_main(a.gcd(&b));
        MPoly::from_nested(&h, &f.ctx, &order, vars_of(f))
    })
}

/// Resultant eliminating `elim`.
pub fn resultant(f: &MPoly, g: &MPoly, elim: &str) -> Result<MPoly> {
    if f.vars != g.vars {
        return Err(Error::ContextMismatch);
    }
    if f.is_zero() {
        return Err(Error::invalid("resultant with a zero polynomial"));
    }
    dispatch!(f, g, elim, |a, b, order| {
        let r = a.resultant(&b);
        MPoly::from_nested(&r, &f.ctx, &order[1..], vars_of(f))
    })
}

/// Product of the distinct irreducible factors in the main variable.
pub fn squarefree_part(f: &MPoly, main: &str) -> Result<MPoly> {
    if f.is_zero() {
        return Err(Error::invalid("squarefree part of zero"));
    }
    dispatch!(f, f, main, |a, _b, order| {
        let s = a.squarefree_part()?;
        MPoly::from_nested(&s, &f.ctx, &order, vars_of(f))
    })
}
