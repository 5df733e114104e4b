//! Rank reduction `ψ_θ = φ_a` and the counting bounds for level `T² + T + 1`.

use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::ring::{FqAlgebra, Ring};
use crate::skew::{DrinfeldModule, SkewPoly};
use crate::sympoly::{Equation, SymPoly};
use crate::Poly;

/// `ψ_θ = φ_a`, a Drinfeld module of rank `r·deg a` over `F_q[θ]`.
#[derive(Clone, Debug)]
pub struct ReductionCert<R: Ring> {
    pub source_rank: usize,
    pub d: usize,
    pub psi: SkewPoly<R>,
}

impl<R: Ring> ReductionCert<R> {
    pub fn target_rank(&self) -> usize {
        self.source_rank * self.d
    }

    /// For `u` commuting with `φ_T`, checks that it commutes with `ψ_θ`.
    pub fn verify_commuting(&self, phi: &DrinfeldModule<R>, u: &SkewPoly<R>) -> Result<bool> {
        let p = phi.phi_t();
        if u.compose(&p) != p.compose(u) {
            return Err(Error::NotAnIsogeny("u does not commute with φ_T".into()));
        }
        Ok(u.compose(&self.psi) == self.psi.compose(u))
    }
}

/// `ψ_θ := φ_a` for `a` given by ring coefficients (ascending, monic).
pub fn rank_reduction_with<R: Ring>(phi: &DrinfeldModule<R>, a: &[R]) -> Result<ReductionCert<R>> {
    let d = a.len().checked_sub(1).filter(|&d| d >= 1 && a[d].is_one());
    let d = d.ok_or_else(|| Error::invalid("a must be monic of degree at least 1"))?;
    let psi = phi.image_with(a)?;
    let rank = phi.rank() * d;
    if psi.tau_degree() != Some(rank) {
        return Err(Error::invalid(format!(
            "φ_a has τ-degree {:?}, expected {rank}",
            psi.tau_degree()
        )));
    }
    Ok(ReductionCert {
        source_rank: phi.rank(),
        d,
        psi,
    })
}

pub fn rank_reduction<R: FqAlgebra>(phi: &DrinfeldModule<R>, a: &Poly) -> Result<ReductionCert<R>> {
    let v: Vec<R> = a.coeffs().iter().map(|c| phi.t().embed(c)).collect();
    rank_reduction_with(phi, &v)
}

fn check_hypothesis(q: u64) -> Result<()> {
    let (p, _) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    if p <= 3 {
        return Err(Error::HypothesisViolation(format!(
            "the bound assumes characteristic p > 3, got p = {p}"
        )));
    }
    Ok(())
}

fn big(q: u64) -> BigUint {
    BigUint::from(q)
}

/// `30q^9 − 5q^8` without the characteristic check.
pub fn bound_pairs_unchecked(q: u64) -> BigUint {
    let q = big(q);
    let q8 = q.pow(8);
    q8.clone() * 30u32 * q - q8 * 5u32
}

/// Bound on the pairs `(a_0, a_1)` for a given `g_6`; needs `p > 3`.
pub fn bound_pairs(q: u64) -> Result<BigUint> {
    check_hypothesis(q)?;
    Ok(bound_pairs_unchecked(q))
}

/// `(q^3+1)(q^2−1)(30q^15 − 4q^14 + q^12 + 2q^11 − q^10 − 2q^9 − q^8)`.
pub fn bound_nq_unchecked(q: u64) -> BigUint {
    let q = big(q);
    let one = BigUint::from(1u32);
    let pos = q.pow(15) * 30u32 + q.pow(12) + q.pow(11) * 2u32;
    let neg = q.pow(14) * 4u32 + q.pow(10) + q.pow(9) * 2u32 + q.pow(8);
    (q.pow(3) + &one) * (q.pow(2) - &one) * (pos - neg)
}

/// Bound on `deg_X Φ_{J,T²+T+1}(X,X)`; needs `p > 3`.
pub fn bound_nq(q: u64) -> Result<BigUint> {
    check_hypothesis(q)?;
    Ok(bound_nq_unchecked(q))
}

/// `5q^14(6q−1)(q^2−1)(q^3+1)`: modules coming from the generic `a_0`.
pub fn bound_generic_modules(q: u64) -> BigUint {
    let q = big(q);
    let one = BigUint::from(1u32);
    q.pow(14) * 5u32 * (q.clone() * 6u32 - &one) * (q.pow(2) - &one) * (q.pow(3) + &one)
}

/// `(q^3+1) q^6`: choices of `(h_1, h_2, Δ)` per `ψ`.
pub fn lift_count(q: u64) -> BigUint {
    let q = big(q);
    (q.pow(3) + 1u32) * q.pow(6)
}

/// Where `a_0` lives, for the exclusions on constant `a_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A0Field {
    /// `F_q^*`.
    Base,
    /// `F_{q^2}^* ∖ F_q^*`.
    Quadratic,
    /// `F_{q^3}^* ∖ F_q^*`.
    Cubic,
    /// `F_{q^4}^* ∖ F_{q^2}^*`.
    Quartic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct A0Exclusion {
    pub case: A0Field,
    pub impossible: bool,
    /// Degree of the polynomial `a_1` must satisfy, when the case is possible.
    pub a1_degree: Option<BigUint>,
}

pub fn a0_exclusion(case: A0Field, q: u64) -> A0Exclusion {
    let b = big(q);
    let (impossible, a1_degree) = match case {
        A0Field::Base | A0Field::Quadratic => (true, None),
        A0Field::Cubic => (false, Some(b.pow(2) + &b + 1u32)),
        A0Field::Quartic => (false, Some(b.pow(4) + b.pow(2) + &b + 1u32)),
    };
    A0Exclusion {
        case,
        impossible,
        a1_degree,
    }
}

/// Equations `coef_i(φ_{T²+T+1}) = g_i` for `φ_T = T + h_1τ + h_2τ² + Δτ³`,
/// plus the univariate shapes cutting out `Δ`, `h_2`, `h_1`.
#[derive(Clone, Debug)]
pub struct LiftSystem {
    pub vars: Arc<Vec<String>>,
    pub equations: Vec<Equation>,
    /// `(unknown, polynomial in X)`.
    pub shapes: Vec<(String, SymPoly)>,
}

impl LiftSystem {
    pub fn to_json(&self) -> Value {
        json!({
            "vars": *self.vars,
            "equations": self.equations.iter().map(Equation::to_json).collect::<Vec<_>>(),
            "shapes": self.shapes.iter().map(|(n, p)| json!({"unknown": n, "poly": p.to_string()})).collect::<Vec<_>>(),
            "constraint": "g6 lies in F_{q^2}^*",
        })
    }
}

/// Equations `coef_i(φ_a) = targets[i−1]`, `i = 1..r·deg a`, for
/// `φ_T = T + h_1τ + … + h_{r−1}τ^{r−1} + Δτ^r` and integer coefficients of `a`.
pub fn image_system(r: usize, a: &[i64], targets: &[&str]) -> Result<(Arc<Vec<String>>, Vec<Equation>)> {
    let d = a.len().checked_sub(1).filter(|_| a.last().is_some_and(|&x| x != 0));
    let d = d.ok_or_else(|| Error::invalid("a must be a nonzero polynomial"))?;
    if r < 2 || d == 0 {
        return Err(Error::invalid("need rank ≥ 2 and deg a ≥ 1"));
    }
    if targets.len() != r * d {
        return Err(Error::invalid(format!(
            "expected {} target names, got {}",
            r * d,
            targets.len()
        )));
    }
    let mut names: Vec<String> = vec!["T".into()];
    names.extend((1..r).map(|i| format!("h{i}")));
    names.push("Delta".into());
    names.extend(targets.iter().map(|s| s.to_string()));
    names.push("X".into());
    let vars = Arc::new(names);
    let v = |n: &str| SymPoly::var(&vars, n).expect("declared");
    let mut g: Vec<SymPoly> = (1..r).map(|i| v(&format!("h{i}"))).collect();
    g.push(v("Delta"));
    let phi = DrinfeldModule::new(v("T"), g)?;
    let av: Vec<SymPoly> = a.iter().map(|&c| SymPoly::constant(&vars, c)).collect();
    let img = phi.image_with(&av)?;
    let equations = (1..=r * d)
        .map(|i| Equation {
            sides: vec![img.coeff(i), v(targets[i - 1])],
        })
        .collect();
    Ok((vars, equations))
}

/// System for lifting a rank-6 `ψ` (coefficients named by `psi`) to a rank-3 `φ`.
pub fn lift_constraints(psi: &[&str]) -> Result<LiftSystem> {
    if psi.len() != 6 {
        return Err(Error::invalid(format!(
            "expected 6 coefficients of ψ, got {}",
            psi.len()
        )));
    }
    let (vars, equations) = image_system(3, &[1, 1, 1], psi)?;
    let v = |n: &str| SymPoly::var(&vars, n).expect("declared");
    let (x, d) = (v("X"), v("Delta"));
    let shapes = vec![
        ("Delta".to_string(), x.frobenius(3) * x.clone() - v(psi[5])),
        (
            "h2".to_string(),
            d.clone() * x.frobenius(3) + d.frobenius(2) * x.clone() - v(psi[4]),
        ),
        (
            "h1".to_string(),
            d.clone() * x.frobenius(3) + d.frobenius(1) * x + v("h2").frobenius(2) * v("h2") - v(psi[3]),
        ),
    ];
    Ok(LiftSystem {
        vars,
        equations,
        shapes,
    })
}
