//! Twisted polynomials `Σ c_i τ^i` with `τ c = c^q τ`, Drinfeld modules, and
//! dual isogenies.

use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::{FqAlgebra, Ring};
use crate::sympoly::{Equation, SymPoly};
use crate::Poly;

#[derive(Clone, Debug)]
pub struct SkewPoly<R: Ring> {
    c: Vec<R>,
    zero: R,
}

impl<R: Ring> PartialEq for SkewPoly<R> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<R: Ring> SkewPoly<R> {
    /// Coefficients of `τ^0, τ^1, …`; trailing zeros are trimmed.
    pub fn new(coeffs: Vec<R>, like: &R) -> Self {
        let mut p = SkewPoly {
            c: coeffs,
            zero: like.zero_like(),
        };
        while p.c.last().is_some_and(|x| x.is_zero()) {
            p.c.pop();
        }
        p
    }

    pub fn zero(like: &R) -> Self {
        SkewPoly {
            c: Vec::new(),
            zero: like.zero_like(),
        }
    }

    /// `c·τ^0`.
    pub fn scalar(c: R) -> Self {
        let z = c.zero_like();
        SkewPoly::new(vec![c], &z)
    }

    /// `c·τ^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); k];
        v.push(c);
        SkewPoly::new(v, &z)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree in `τ`, `None` for zero.
    pub fn tau_degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> R {
        self.coeff(self.c.len().saturating_sub(1))
    }

    /// Composition `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Self {
        if self.is_zero() || g.is_zero() {
            return SkewPoly::zero(&self.zero);
        }
        let mut v = vec![self.zero.clone(); self.c.len() + g.c.len() - 1];
        for (i, fi) in self.c.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in g.c.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].clone() + fi.clone() * gj.frobenius(i as u32);
            }
        }
        SkewPoly::new(v, &self.zero)
    }

    /// `(quot, rem)` with `self = quot ∘ g + rem`, `deg rem < deg g`.
    pub fn right_divide(&self, g: &Self) -> Result<(Self, Self)> {
        let dg = g.tau_degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.clone();
        let mut q = vec![self.zero.clone(); self.c.len().saturating_sub(dg)];
        while let Some(dr) = r.tau_degree() {
            if dr < dg {
                break;
            }
            let k = dr - dg;
            let t = r
                .lc()
                .try_div(&g.lc().frobenius(k as u32))
                .ok_or_else(|| Error::NotDivisible(format!("leading coefficient at τ^{dr}")))?;
            r = r - SkewPoly::monomial(t.clone(), k).compose(g);
            if r.tau_degree() == Some(dr) {
                return Err(Error::NotDivisible(format!("leading term at τ^{dr} did not cancel")));
            }
            q[k] = t;
        }
        Ok((SkewPoly::new(q, &self.zero), r))
    }

    pub fn map<S: Ring>(&self, like: &S, f: impl Fn(&R) -> S) -> SkewPoly<S> {
        SkewPoly::new(self.c.iter().map(f).collect(), like)
    }

    /// JSON terms `{"tau": i, "c", "e"}` using a conversion of coefficients.
    pub fn to_json_with(&self, conv: impl Fn(&R) -> Result<MPoly>) -> Result<Value> {
        let mut terms = Vec::new();
        let mut head = None;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let m = conv(c)?;
            let j = m.to_json();
            if head.is_none() {
                head = Some((j["field"].clone(), j["vars"].clone()));
            }
            for t in j["terms"].as_array().expect("terms") {
                terms.push(json!({"tau": i, "c": t["c"], "e": t["e"]}));
            }
        }
        let (field, vars) = head.unwrap_or((Value::Null, json!([])));
        Ok(json!({"field": field, "vars": vars, "terms": terms}))
    }
}

impl<R: Ring> Add for SkewPoly<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        SkewPoly::new(v, &self.zero)
    }
}

impl<R: Ring> Neg for SkewPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        SkewPoly {
            c: self.c.into_iter().map(|x| -x).collect(),
            zero: self.zero,
        }
    }
}

impl<R: Ring> Sub for SkewPoly<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

/// `φ_T = t + g_1 τ + … + g_r τ^r`; `t` is the image of `T` in the coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct DrinfeldModule<R: Ring> {
    t: R,
    g: Vec<R>,
}

impl<R: Ring> DrinfeldModule<R> {
    pub fn new(t: R, g: Vec<R>) -> Result<Self> {
        if g.len() < 2 {
            return Err(Error::invalid("rank must be at least 2"));
        }
        if g.last().is_some_and(|x| x.is_zero()) {
            return Err(Error::invalid("top coefficient must be nonzero"));
        }
        Ok(DrinfeldModule { t, g })
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.g
    }

    pub fn t(&self) -> &R {
        &self.t
    }

    pub fn phi_t(&self) -> SkewPoly<R> {
        let mut v = vec![self.t.clone()];
        v.extend(self.g.iter().cloned());
        SkewPoly::new(v, &self.t)
    }

    /// `φ_a` for `a = Σ a_i T^i` with coefficients already in the ring.
    pub fn image_with(&self, a: &[R]) -> Result<SkewPoly<R>> {
        if a.iter().all(|x| x.is_zero()) {
            return Err(Error::invalid("image of the zero polynomial"));
        }
        let phi = self.phi_t();
        let mut acc = SkewPoly::zero(&self.t);
        for c in a.iter().rev() {
            acc = phi.compose(&acc) + SkewPoly::scalar(c.clone());
        }
        Ok(acc)
    }
}

impl<R: FqAlgebra> DrinfeldModule<R> {
    pub fn image(&self, a: &Poly) -> Result<SkewPoly<R>> {
        let v: Vec<R> = a.coeffs().iter().map(|c| self.t.embed(c)).collect();
        self.image_with(&v)
    }
}

/// Solves `u ∘ û = û ∘ u = φ_a` for `û` coefficient by coefficient.
///
/// `b_0 = φ_{a,0}/u_0`; for `k ≥ 1`, matching `τ^k` in both compositions gives
/// `b_k (u_0 − u_0^{q^k}) = Σ_{j<k} b_j u_{k−j}^{q^j} − Σ_{i≥1} u_i b_{k−i}^{q^i}`.
/// Both compositions are checked before returning.
pub fn dual_isogeny_with<R: Ring>(phi_a: &SkewPoly<R>, u: &SkewPoly<R>) -> Result<SkewPoly<R>> {
    let du = u
        .tau_degree()
        .ok_or_else(|| Error::invalid("isogeny must be nonzero"))?;
    let da = phi_a
        .tau_degree()
        .ok_or_else(|| Error::invalid("φ_a must be nonzero"))?;
    if da < du {
        return Err(Error::NotAnIsogeny(format!("τ-degree {du} exceeds that of φ_a ({da})")));
    }
    let n = da - du;
    let u0 = u.coeff(0);
    let mut b: Vec<R> = Vec::with_capacity(n + 1);
    b.push(
        phi_a
            .coeff(0)
            .try_div(&u0)
            .ok_or(Error::DegenerateDenominator { index: 0 })?,
    );
    for k in 1..=n {
        let mut rhs = u0.zero_like();
        for (j, bj) in b.iter().enumerate() {
            rhs = rhs + bj.clone() * u.coeff(k - j).frobenius(j as u32);
        }
        for i in 1..=k.min(du) {
            rhs = rhs - u.coeff(i) * b[k - i].frobenius(i as u32);
        }
        let den = u0.clone() - u0.frobenius(k as u32);
        let bk = if rhs.is_zero() && !den.is_zero() {
            rhs
        } else {
            rhs.try_div(&den).ok_or(Error::DegenerateDenominator { index: k })?
        };
        b.push(bk);
    }
    let hat = SkewPoly::new(b, &u0);
    if u.compose(&hat) != *phi_a {
        return Err(Error::NotAnIsogeny("u ∘ û differs from φ_a".into()));
    }
    if hat.compose(u) != *phi_a {
        return Err(Error::NotAnIsogeny("û ∘ u differs from φ_a".into()));
    }
    Ok(hat)
}

impl<R: FqAlgebra> DrinfeldModule<R> {
    /// The dual of the self-isogeny `u` with respect to `a`.
    pub fn dual_isogeny(&self, u: &SkewPoly<R>, a: &Poly) -> Result<SkewPoly<R>> {
        dual_isogeny_with(&self.image(a)?, u)
    }

    /// Whether `u ∘ φ_T = φ_T ∘ u`.
    pub fn commutes_with(&self, u: &SkewPoly<R>) -> bool {
        let p = self.phi_t();
        u.compose(&p) == p.compose(u)
    }
}

/// Coefficient-matching equations of `u ∘ û = û ∘ u = φ_a`.
#[derive(Clone, Debug)]
pub struct CommutationSystem {
    pub vars: Arc<Vec<String>>,
    pub equations: Vec<Equation>,
}

impl CommutationSystem {
    pub fn to_json(&self) -> Value {
        json!({
            "vars": *self.vars,
            "equations": self.equations.iter().map(Equation::to_json).collect::<Vec<_>>(),
        })
    }
}

fn sym(vars: &Arc<Vec<String>>, name: &str) -> SymPoly {
    SymPoly::var(vars, name).expect("declared")
}

/// Symbolic system for a monic isogeny `u = a_0 + … + a_{k−1}τ^{k−1} + τ^k` of
/// the rank-`r` module `φ_T = T + g_1τ + … + g_{r−1}τ^{r−1} + top·τ^r` and
/// `a = Σ a_i T^i` (integer coefficients). The dual is
/// `û = b_0 + … + b_{n−1}τ^{n−1} + c·τ^n`, with `c = top` when `deg a = 1`
/// and an extra unknown `c` otherwise.
pub fn commutation_system(r: usize, k: usize, a: &[i64], top: &str) -> Result<CommutationSystem> {
    if r < 2 {
        return Err(Error::invalid("rank must be at least 2"));
    }
    let d = a.len().checked_sub(1).filter(|_| a.last() != Some(&0));
    let d = d.ok_or_else(|| Error::invalid("a must be a nonzero polynomial"))?;
    let top_deg = r * d;
    if k == 0 || k >= top_deg {
        return Err(Error::invalid(format!("isogeny degree must satisfy 1 ≤ k < {top_deg}")));
    }
    let n = top_deg - k;
    let mut names: Vec<String> = vec!["T".into()];
    names.extend((0..k).map(|i| format!("a{i}")));
    names.extend((0..n).map(|i| format!("b{i}")));
    if d > 1 {
        names.push("c".into());
    }
    names.extend((1..r).map(|i| format!("g{i}")));
    names.push(top.into());
    let vars = Arc::new(names);
    let mut u: Vec<SymPoly> = (0..k).map(|i| sym(&vars, &format!("a{i}"))).collect();
    u.push(SymPoly::constant(&vars, 1));
    let mut b: Vec<SymPoly> = (0..n).map(|i| sym(&vars, &format!("b{i}"))).collect();
    b.push(sym(&vars, if d > 1 { "c" } else { top }));
    let mut g = vec![sym(&vars, "T")];
    g.extend((1..r).map(|i| sym(&vars, &format!("g{i}"))));
    g.push(sym(&vars, top));
    let zero = SymPoly::zero(&vars);
    let phi = DrinfeldModule::new(g[0].clone(), g[1..].to_vec())?;
    let av: Vec<SymPoly> = a.iter().map(|&x| SymPoly::constant(&vars, x)).collect();
    let phi_a = phi.image_with(&av)?;
    let us = SkewPoly::new(u, &zero);
    let bs = SkewPoly::new(b, &zero);
    let left = us.compose(&bs);
    let right = bs.compose(&us);
    let mut equations = Vec::new();
    for i in 0..=top_deg {
        let mut sides: Vec<SymPoly> = Vec::new();
        for s in [left.coeff(i), right.coeff(i), phi_a.coeff(i)] {
            if sides.last() != Some(&s) {
                sides.push(s);
            }
        }
        equations.push(Equation { sides });
    }
    Ok(CommutationSystem { vars, equations })
}
