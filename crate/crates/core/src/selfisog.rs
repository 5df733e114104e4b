//! Self-isogenous modular polynomials `Φ_{J,T}(X,X)` for `T`-cyclic
//! isogenies `u = yτ^0 + τ`.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{gcd_u64, FieldCtx, Fq};
use crate::frac::Frac;
use crate::linalg::Matrix;
use crate::mpoly::MPoly;
use crate::poly::{Pretty, UPoly};
use crate::quotient::{bipoly_over_fqt, FqTQuot, QuotElem};
use crate::ring::{GcdDomain, Ring};
use crate::{BiPoly, FqT, Poly, RatFunc};

/// Exponents `(δ_1, …, δ_{r−1}; δ_r)` of a basic J-invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JTuple {
    pub q: u64,
    pub delta: Vec<u64>,
    pub delta_r: u64,
}

impl JTuple {
    pub fn r(&self) -> usize {
        self.delta.len() + 1
    }

    /// Validates `Σ δ_i (q^i − 1) = δ_r (q^r − 1)`, the box bounds, and the gcd.
    pub fn new(q: u64, r: usize, delta: Vec<u64>, delta_r: u64) -> Result<Self> {
        if r < 2 || delta.len() != r - 1 {
            return Err(Error::invalid(format!(
                "expected {} exponents before δ_r",
                r.saturating_sub(1)
            )));
        }
        let jt = JTuple { q, delta, delta_r };
        jt.check()?;
        Ok(jt)
    }

    fn check(&self) -> Result<()> {
        let (q, r) = (self.q as u128, self.r() as u32);
        let qr = q.checked_pow(r).ok_or_else(|| Error::TooLarge("q^r".into()))? - 1;
        let mut lhs: u128 = 0;
        for (i, &d) in self.delta.iter().enumerate() {
            let i = i as u32 + 1;
            let bound = qr / (q.pow(gcd_u64(i as u64, r as u64) as u32) - 1);
            if d as u128 > bound {
                return Err(Error::invalid(format!("δ_{i} = {d} exceeds {bound}")));
            }
            lhs += d as u128 * (q.pow(i) - 1);
        }
        if lhs != self.delta_r as u128 * qr {
            return Err(Error::invalid("weights do not balance: Σ δ_i(q^i−1) ≠ δ_r(q^r−1)"));
        }
        let g = self.delta.iter().fold(self.delta_r, |a, &b| gcd_u64(a, b));
        if g != 1 {
            return Err(Error::invalid(format!("gcd of the exponents is {g}, not 1")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({"delta": self.delta, "delta_r": self.delta_r})
    }
}

/// All basic J-invariant exponent tuples, lexicographic in `(δ_1, …, δ_{r−1})`.
pub fn enumerate_basic_j(q: u64, r: usize) -> Result<Vec<JTuple>> {
    if q < 2 || r < 2 {
        return Err(Error::invalid("need q ≥ 2 and r ≥ 2"));
    }
    let qb = q as u128;
    let qr = qb
        .checked_pow(r as u32)
        .filter(|v| *v < 1 << 60)
        .ok_or_else(|| Error::TooLarge("q^r".into()))?
        - 1;
    let bounds: Vec<u64> = (1..r as u32)
        .map(|i| (qr / (qb.pow(gcd_u64(i as u64, r as u64) as u32) - 1)) as u64)
        .collect();
    let size = bounds.iter().try_fold(1u64, |a, &b| a.checked_mul(b + 1));
    if size.is_none_or(|s| s > 50_000_000) {
        return Err(Error::TooLarge(format!("search box for q={q}, r={r}")));
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; r - 1];
    loop {
        let lhs: u128 = cur
            .iter()
            .enumerate()
            .map(|(i, &d)| d as u128 * (qb.pow(i as u32 + 1) - 1))
            .sum();
        if lhs.is_multiple_of(qr) {
            let dr = (lhs / qr) as u64;
            if cur.iter().fold(dr, |a, &b| gcd_u64(a, b)) == 1 {
                out.push(JTuple {
                    q,
                    delta: cur.clone(),
                    delta_r: dr,
                });
            }
        }
        let mut i = r - 2;
        loop {
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
        }
    }
}

/// The b-sequence and derived data for one `Δ`.
#[derive(Clone, Debug)]
pub struct SelfIsogData {
    pub q: u64,
    pub r: usize,
    pub delta: Fq,
    /// `b_0, …, b_{r−2}`.
    pub b: Vec<RatFunc>,
    /// `E(y) = b_{r−2}^q − b_{r−2} − Δ(y^{q^{r−1}} − y)`.
    pub e: RatFunc,
}

/// Outcome of the constant-root test on `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantRootCheck {
    pub pass: bool,
    /// Gcd over `F_q[X]` of the `T`-coefficients (constant on pass).
    pub witness: Poly,
}

/// `g(Δ, X)` with its squarefree part.
#[derive(Clone, Debug)]
pub struct ModularG {
    /// Numerator of `E`, primitive over `A`, with any constant-root factor removed.
    pub g: BiPoly,
    pub squarefree: BiPoly,
    /// Whether `g` had repeated factors.
    pub repeated: bool,
    pub constant_roots: ConstantRootCheck,
}

fn ctx_of(d: &Fq) -> &Arc<FieldCtx> {
    d.ctx()
}

fn y_poly(ctx: &Arc<FieldCtx>) -> BiPoly {
    UPoly::var(&Poly::one_over(&Fq::zero(ctx)))
}

fn t_poly(ctx: &Arc<FieldCtx>) -> Poly {
    UPoly::var(&Fq::zero(ctx))
}

fn y_qk_minus_y(ctx: &Arc<FieldCtx>, q: u64, k: u32) -> Result<BiPoly> {
    let n = q
        .checked_pow(k)
        .filter(|&n| n < 1 << 24)
        .ok_or_else(|| Error::TooLarge(format!("y^(q^{k})")))?;
    let one = Poly::one_over(&Fq::zero(ctx));
    Ok(UPoly::monomial(one, n as usize) - y_poly(ctx))
}

fn rf(x: BiPoly) -> RatFunc {
    Frac::from_ring(x)
}

pub fn build_recurrence(ctx: &Arc<FieldCtx>, r: usize, delta: &Fq) -> Result<SelfIsogData> {
    if r < 2 {
        return Err(Error::invalid("rank must be at least 2"));
    }
    if delta.is_zero() {
        return Err(Error::invalid("Δ must be a nonzero constant"));
    }
    let q = ctx.q();
    let t = UPoly::constant(t_poly(ctx));
    let mut b = vec![Frac::new(t, y_poly(ctx))?];
    for i in 1..=r - 2 {
        let prev = b[i - 1].clone();
        let num = prev.frobenius(1) - prev;
        b.push(num.checked_div(&rf(y_qk_minus_y(ctx, q, i as u32)?))?);
    }
    let last = b[r - 2].clone();
    let d = rf(UPoly::constant(UPoly::constant(delta.clone())));
    let e = last.frobenius(1) - last - d * rf(y_qk_minus_y(ctx, q, r as u32 - 1)?);
    Ok(SelfIsogData {
        q,
        r,
        delta: delta.clone(),
        b,
        e,
    })
}

/// Swaps the two variables of `A[y]`, giving coefficients in `F_q[y]` of the powers of `T`.
pub fn swap_vars(f: &BiPoly, ctx: &Arc<FieldCtx>) -> BiPoly {
    let z = Fq::zero(ctx);
    let n = f.coeffs().iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
    let v = (0..n)
        .map(|j| UPoly::new(f.coeffs().iter().map(|c| c.coeff(j)).collect(), z.clone()))
        .collect();
    UPoly::new(v, Poly::zero(&z))
}

/// Passes iff the `T`-coefficients of `g` have constant gcd in `F_q[X]`, i.e.
/// `g` has no root in the algebraic closure of `F_q`.
pub fn constant_root_check(g: &BiPoly, ctx: &Arc<FieldCtx>) -> ConstantRootCheck {
    let w = swap_vars(g, ctx).content();
    ConstantRootCheck {
        pass: w.deg() <= 0,
        witness: w,
    }
}

pub fn modular_poly_g(data: &SelfIsogData) -> Result<ModularG> {
    let ctx = ctx_of(&data.delta).clone();
    let mut g = data.e.num().primitive_normalized();
    let check = constant_root_check(&g, &ctx);
    if !check.pass {
        let w: BiPoly = check
            .witness
            .map(&Poly::zero(&Fq::zero(&ctx)), |c| UPoly::constant(c.clone()));
        g = g.exact_div(&w).expect("content divides").primitive_normalized();
    }
    let squarefree = g.squarefree_part()?;
    Ok(ModularG {
        repeated: squarefree.deg() != g.deg(),
        g,
        squarefree,
        constant_roots: check,
    })
}

/// `g_i = y b_i + b_{i−1}^q` for `i ≤ r−2`, `g_{r−1} = yΔ + b_{r−2}^q`.
pub fn coefficients_from_root(data: &SelfIsogData) -> Vec<RatFunc> {
    let ctx = ctx_of(&data.delta);
    let y = rf(y_poly(ctx));
    let mut g = Vec::with_capacity(data.r - 1);
    for i in 1..=data.r - 2 {
        g.push(y.clone() * data.b[i].clone() + data.b[i - 1].frobenius(1));
    }
    let d = rf(UPoly::constant(UPoly::constant(data.delta.clone())));
    g.push(y * d + data.b[data.r - 2].frobenius(1));
    g
}

/// `∏ g_i^{δ_i} / Δ^{δ_r}`.
pub fn j_eval(jt: &JTuple, data: &SelfIsogData) -> Result<RatFunc> {
    if jt.q != data.q || jt.r() != data.r {
        return Err(Error::invalid("J tuple and data disagree on (q, r)"));
    }
    let g = coefficients_from_root(data);
    let mut acc = g[0].one_like();
    for (gi, &d) in g.iter().zip(&jt.delta) {
        if d > 0 {
            acc = acc * gi.pow(d);
        }
    }
    let dr = data.delta.pow_u64(jt.delta_r).inverse()?;
    Ok(acc * rf(UPoly::constant(UPoly::constant(dr))))
}

type Tri = UPoly<BiPoly>;

/// `Res_y(g(y), D(y)·X − N(y))` as a polynomial in `X` over `A` (outer `X`).
pub fn resultant_in_x(g: &BiPoly, n: &BiPoly, d: &BiPoly, ctx: &Arc<FieldCtx>) -> BiPoly {
    let zp = Poly::zero(&Fq::zero(ctx));
    let zb: BiPoly = UPoly::zero(&zp);
    let gl: Tri = g.map(&zb, |c| UPoly::constant(c.clone()));
    let len = n.coeffs().len().max(d.coeffs().len());
    let lin: Tri = UPoly::new(
        (0..len)
            .map(|j| UPoly::new(vec![-n.coeff(j), d.coeff(j)], zp.clone()))
            .collect(),
        zb,
    );
    gl.resultant(&lin)
}

/// Coefficients in `F_q(T)` of a polynomial over `A`.
pub fn over_fqt(f: &BiPoly) -> UPoly<FqT> {
    bipoly_over_fqt(f)
}

/// The polynomial over `A` when every coefficient is integral.
pub fn integral(f: &UPoly<FqT>) -> Result<BiPoly> {
    let zp = f.coeff_zero().num().clone();
    let v = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_integral().cloned().ok_or_else(|| {
                Error::IntegralityViolation(format!(
                    "coefficient of X^{i} has denominator {}",
                    c.den().pretty(&["T"])
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UPoly::new(v, zp))
}

/// `Φ_Δ` together with its inputs.
#[derive(Clone, Debug)]
pub struct PhiDelta {
    pub delta: Fq,
    pub g: ModularG,
    pub j: RatFunc,
    /// Monic in `X` over `F_q(T)`.
    pub phi: UPoly<FqT>,
}

fn monic_fqt(f: &BiPoly) -> Result<UPoly<FqT>> {
    let f = over_fqt(f);
    if f.is_zero() {
        return Err(Error::invalid("vanishing resultant"));
    }
    Ok(f.monic())
}

pub fn phi_delta(ctx: &Arc<FieldCtx>, r: usize, jt: &JTuple, delta: &Fq) -> Result<PhiDelta> {
    let data = build_recurrence(ctx, r, delta)?;
    let g = modular_poly_g(&data)?;
    let j = j_eval(jt, &data)?;
    let gs = &g.squarefree;
    let (mut n, mut d) = (j.num().clone(), j.den().clone());
    let common = gs.gcd(&d);
    if common.deg() > 0 {
        return Err(Error::DegenerateJDenominator {
            witness: common.pretty(&["y", "T"]),
        });
    }
    if gs.lc().is_unit() {
        n = n.div_rem(gs).expect("unit leading coefficient").1;
        d = d.div_rem(gs).expect("unit leading coefficient").1;
    }
    let res = resultant_in_x(gs, &n, &d, ctx);
    let phi = monic_fqt(&res)?;
    Ok(PhiDelta {
        delta: delta.clone(),
        g,
        j,
        phi,
    })
}

/// Which `Δ ∈ F_q^*` enter the product.
#[derive(Clone, Debug, PartialEq)]
pub enum DeltaChoice {
    All,
    One(Fq),
}

#[derive(Clone, Debug)]
pub struct PhiResult {
    pub parts: Vec<PhiDelta>,
    /// Monic in `X`, coefficients in `A`, `X` outer.
    pub phi: BiPoly,
    /// Pairs `(i, j)` of parts whose `Φ_Δ` share a factor.
    pub shared: Vec<(usize, usize)>,
}

/// `Φ_{J,T}(X,X) = ∏_Δ Φ_Δ`, in generator order of `F_q^*`.
pub fn phi_self_t(ctx: &Arc<FieldCtx>, r: usize, jt: &JTuple, choice: &DeltaChoice) -> Result<PhiResult> {
    if jt.q != ctx.q() || jt.r() != r {
        return Err(Error::invalid("J tuple does not match (q, r)"));
    }
    let deltas = match choice {
        DeltaChoice::All => Fq::units_by_generator(ctx),
        DeltaChoice::One(d) => vec![d.clone()],
    };
    let parts: Vec<PhiDelta> = deltas
        .par_iter()
        .map(|d| phi_delta(ctx, r, jt, d))
        .collect::<Result<Vec<_>>>()?;
    let mut prod = parts[0].phi.one_like();
    for p in &parts {
        prod = prod * p.phi.clone();
    }
    let mut shared = Vec::new();
    for i in 0..parts.len() {
        for k in i + 1..parts.len() {
            if parts[i].phi.ext_gcd(&parts[k].phi).0.deg() > 0 {
                shared.push((i, k));
            }
        }
    }
    Ok(PhiResult {
        phi: integral(&prod)?,
        parts,
        shared,
    })
}

/// Characteristic polynomial of multiplication by `u` on `F_q(T)[y]/(m)`.
pub fn charpoly_mult(m: &BiPoly, u: &RatFunc) -> Result<UPoly<FqT>> {
    let md = FqTQuot::modulus_from(m)?;
    let x = FqTQuot::from_ratfunc(u, &md)?;
    let n = md.deg() as usize;
    let zero = md.coeff_zero().clone();
    let mut mat = Matrix::zeros(n, n, &zero);
    let mut col = x.clone();
    let y = QuotElem::generator(md.clone())?;
    for j in 0..n {
        for i in 0..n {
            mat.set(i, j, col.lift().coeff(i));
        }
        col = col * y.clone();
    }
    mat.charpoly()
}

/// The polynomial `g` as `(T, X)` polynomial.
pub fn g_to_mpoly(g: &BiPoly, ctx: &Arc<FieldCtx>) -> Result<MPoly> {
    MPoly::from_nested(g, ctx, &["X", "T"], vec!["T", "X"])
}

/// `Φ` (outer `X`, inner `T`) as a `(T, X)` polynomial.
pub fn phi_to_mpoly(phi: &BiPoly, ctx: &Arc<FieldCtx>) -> Result<MPoly> {
    MPoly::from_nested(phi, ctx, &["X", "T"], vec!["T", "X"])
}

/// Reads a `(T, X)` polynomial as `A[X]`.
pub fn mpoly_to_bipoly(f: &MPoly, outer: &str, inner: &str) -> Result<BiPoly> {
    f.to_nested(&[outer, inner])
}
