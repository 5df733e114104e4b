//! Polynomials whose exponents are polynomials in an unspecified `q`.
//!
//! Used to write down commutation systems for every `q` at once. The
//! Frobenius `x ↦ x^{q^k}` multiplies each exponent by `q^k`; integer
//! coefficients are left alone since they lie in the prime field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// `Σ c_k q^k`, ascending and trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QExp(Vec<u64>);

impl QExp {
    pub fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        QExp(c)
    }

    pub fn constant(n: u64) -> Self {
        QExp::new(vec![n])
    }

    /// `q^k`.
    pub fn q_pow(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        QExp(c)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        QExp::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + o.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    fn shift(&self, k: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k as usize];
        c.extend_from_slice(&self.0);
        QExp(c)
    }

    /// Value at a concrete `q`; `None` on overflow.
    pub fn eval(&self, q: u64) -> Option<u64> {
        let mut acc: u64 = 0;
        for &c in self.0.iter().rev() {
            acc = acc.checked_mul(q)?.checked_add(c)?;
        }
        Some(acc)
    }
}

/// Order as polynomials in a large `q`.
impl Ord for QExp {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&o.0.len())
            .then_with(|| self.0.iter().rev().cmp(o.0.iter().rev()))
    }
}

impl PartialOrd for QExp {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let base = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            parts.push(match (c, base.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => base,
                _ => format!("{c}*{base}"),
            });
        }
        f.write_str(&parts.join("+"))
    }
}

type Mono = Vec<QExp>;

/// Polynomial over `Z` in named variables with `N[q]` exponents.
#[derive(Clone, Debug)]
pub struct SymPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Mono, i64>,
}

impl PartialEq for SymPoly {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && self.vars == o.vars
    }
}

fn mono_total(m: &Mono) -> QExp {
    m.iter().fold(QExp::default(), |a, e| a.add(e))
}

/// Graded lexicographic order on the declared variable order.
fn grlex(a: &Mono, b: &Mono) -> Ordering {
    mono_total(a).cmp(&mono_total(b)).then_with(|| a.cmp(b))
}

impl SymPoly {
    pub fn zero(vars: &Arc<Vec<String>>) -> Self {
        SymPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: i64) -> Self {
        let mut p = SymPoly::zero(vars);
        if c != 0 {
            p.terms.insert(vec![QExp::default(); vars.len()], c);
        }
        p
    }

    /// The variable called `name`.
    pub fn var(vars: &Arc<Vec<String>>, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::invalid(format!("unknown variable {name}")))?;
        let mut m = vec![QExp::default(); vars.len()];
        m[i] = QExp::constant(1);
        let mut p = SymPoly::zero(vars);
        p.terms.insert(m, 1);
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> Vec<(&Mono, i64)> {
        let mut t: Vec<_> = self.terms.iter().map(|(m, &c)| (m, c)).collect();
        t.sort_by(|a, b| grlex(b.0, a.0));
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Mono, c: i64) {
        let e = self.terms.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    /// Specializes `q` and reduces coefficients mod `p`.
    pub fn specialize(&self, ctx: &Arc<FieldCtx>) -> Result<MPoly> {
        let q = ctx.q();
        let mut out = MPoly::zero(ctx, self.vars.iter().map(String::as_str).collect());
        for (m, &c) in &self.terms {
            let e = m
                .iter()
                .map(|x| {
                    x.eval(q)
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| Error::TooLarge(format!("exponent {x} at q={q}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            out.add_term(e, crate::field::Fq::from_int(ctx, c));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|(m, c)| json!({"c": c, "e": m.iter().map(|x| x.coeffs().to_vec()).collect::<Vec<_>>()}))
            .collect();
        json!({"vars": *self.vars, "terms": terms})
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().into_iter().enumerate() {
            let mut factors = Vec::new();
            for (v, e) in self.vars.iter().zip(m) {
                if e.is_zero() {
                    continue;
                }
                let es = e.to_string();
                factors.push(if es == "1" {
                    v.clone()
                } else if es.chars().all(|ch| ch.is_ascii_alphanumeric()) {
                    format!("{v}^{es}")
                } else {
                    format!("{v}^({es})")
                });
            }
            let body = factors.join("*");
            let mag = c.unsigned_abs();
            let term = match (body.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => body,
                (false, _) => format!("{mag}*{body}"),
            };
            if k == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

impl Add for SymPoly {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Neg for SymPoly {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Sub for SymPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for SymPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = SymPoly::zero(&self.vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let m: Mono = a.iter().zip(b).map(|(x, y)| x.add(y)).collect();
                out.insert(m, ca * cb);
            }
        }
        out
    }
}

impl Ring for SymPoly {
    fn zero_like(&self) -> Self {
        SymPoly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        SymPoly::constant(&self.vars, 1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int_like(&self, n: i64) -> Self {
        SymPoly::constant(&self.vars, n)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn const_field_size(&self) -> u64 {
        0
    }
    fn frobenius(&self, k: u32) -> Self {
        let mut out = SymPoly::zero(&self.vars);
        for (m, &c) in &self.terms {
            out.terms.insert(m.iter().map(|e| e.shift(k)).collect(), c);
        }
        out
    }
    /// Only division by a monomial with coefficient `±1` is supported.
    fn try_div(&self, d: &Self) -> Option<Self> {
        let (dm, &dc) = d.terms.iter().next().filter(|_| d.terms.len() == 1)?;
        if dc.abs() != 1 {
            return None;
        }
        let mut out = SymPoly::zero(&self.vars);
        for (m, &c) in &self.terms {
            let mut e = Vec::with_capacity(m.len());
            for (x, y) in m.iter().zip(dm) {
                if y.0
                    .iter()
                    .enumerate()
                    .any(|(i, &v)| x.0.get(i).copied().unwrap_or(0) < v)
                {
                    return None;
                }
                let n = x.0.len();
                e.push(QExp::new(
                    (0..n).map(|i| x.0[i] - y.0.get(i).copied().unwrap_or(0)).collect(),
                ));
            }
            out.terms.insert(e, c * dc);
        }
        Some(out)
    }
}

/// `s_0 = s_1 = …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub sides: Vec<SymPoly>,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sides.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(" = "))
    }
}

impl Equation {
    pub fn to_json(&self) -> Value {
        json!({
            "text": self.to_string(),
            "sides": self.sides.iter().map(SymPoly::to_json).collect::<Vec<_>>(),
        })
    }
}
