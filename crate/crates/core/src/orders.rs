//! Orders in degree-`r` extensions of `F_q(T)`: norms, Fitting norms,
//! primitivity and the `γ(O, a)` count.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq};
use crate::frac::Frac;
use crate::linalg::Matrix;
use crate::mpoly::{field_from_json, MPoly};
use crate::poly::{Pretty, UPoly};
use crate::ring::{GcdDomain, Ring};
use crate::{BiPoly, FqT, Poly};

/// An order `O` given by an `A`-basis in the power basis `1, y, …, y^{r−1}`
/// of `K = F_q(T)[y]/(m)`.
#[derive(Clone, Debug)]
pub struct OrderSpec {
    ctx: Arc<FieldCtx>,
    minpoly: BiPoly,
    /// Row `i` holds the power-basis coordinates of `ω_i`.
    basis: Matrix<Poly>,
    hnf: Matrix<Poly>,
    hnf_u: Matrix<Poly>,
    pub imaginary: bool,
}

fn zero_a(ctx: &Arc<FieldCtx>) -> Poly {
    Poly::zero(&Fq::zero(ctx))
}

/// Whether `a` is irreducible, by trial division with monic polynomials of
/// degree up to `deg a / 2`.
pub fn is_irreducible(a: &Poly, max_deg: usize) -> Result<bool> {
    let d = a.degree().ok_or_else(|| Error::invalid("zero polynomial"))?;
    if d == 0 {
        return Ok(false);
    }
    let ctx = a.lc().ctx().clone();
    let q = ctx.q();
    let half = d / 2;
    if half > max_deg {
        return Err(Error::TooLarge(format!("trial division up to degree {half}")));
    }
    for k in 1..=half {
        let count = q.checked_pow(k as u32).filter(|&c| c <= 1 << 24);
        let count = count.ok_or_else(|| Error::TooLarge("trial division".into()))?;
        for idx in 0..count {
            let mut c = Vec::with_capacity(k + 1);
            let mut t = idx;
            for _ in 0..k {
                c.push(Fq::from_index(&ctx, t % q));
                t /= q;
            }
            c.push(Fq::one(&ctx));
            let f = UPoly::from_coeffs(c);
            if a.div_rem(&f).expect("monic").1.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Newton-polygon test at the infinite place: `Some(true)` when `m` has a
/// single slope `s/r` with `gcd(s, r) = 1` (so `∞` is totally ramified and
/// `K` is imaginary), `None` when the test is inconclusive.
pub fn imaginary_heuristic(m: &BiPoly) -> Option<bool> {
    let r = m.degree()?;
    if r == 0 || !m.lc().is_one() {
        return None;
    }
    let s = m.coeff(0).degree()?;
    let single = (1..r).all(|i| m.coeff(i).degree().is_none_or(|di| r * di <= (r - i) * s));
    (single && crate::field::gcd_u64(s as u64, r as u64) == 1).then_some(true)
}

impl OrderSpec {
    pub fn new(minpoly: BiPoly, basis: Vec<Vec<Poly>>, imaginary: bool) -> Result<Self> {
        let r = minpoly
            .degree()
            .filter(|&r| r >= 1)
            .ok_or_else(|| Error::invalid("minimal polynomial must have positive degree"))?;
        if !minpoly.lc().is_one() {
            return Err(Error::invalid("minimal polynomial must be monic in y"));
        }
        let ctx = minpoly.lc().lc().ctx().clone();
        if basis.len() != r || basis.iter().any(|row| row.len() != r) {
            return Err(Error::invalid(format!("basis must be {r}×{r}")));
        }
        let basis = Matrix::from_rows(basis)?;
        if basis.det()?.is_zero() {
            return Err(Error::invalid("basis matrix is singular"));
        }
        let (hnf, hnf_u) = basis.hermite_normal_form();
        let spec = OrderSpec {
            ctx,
            minpoly,
            basis,
            hnf,
            hnf_u,
            imaginary,
        };
        let mut one = vec![zero_a(&spec.ctx); r];
        one[0] = one[0].one_like();
        spec.coords(&one)
            .ok_or_else(|| Error::invalid("1 is not in the order"))?;
        for i in 0..r {
            for j in i..r {
                let p = spec.mul_power(spec.basis.row(i), spec.basis.row(j));
                if spec.coords(&p).is_none() {
                    return Err(Error::invalid(format!("ω_{} ω_{} is not in the order", i + 1, j + 1)));
                }
            }
        }
        Ok(spec)
    }

    /// The maximal-looking order `A[y]`.
    pub fn power_basis(minpoly: BiPoly, imaginary: bool) -> Result<Self> {
        let r = minpoly.degree().unwrap_or(0);
        let ctx = minpoly.lc().lc().ctx().clone();
        let z = zero_a(&ctx);
        let rows = (0..r)
            .map(|i| (0..r).map(|j| if i == j { z.one_like() } else { z.clone() }).collect())
            .collect();
        OrderSpec::new(minpoly, rows, imaginary)
    }

    /// `A + f·O'` where `O'` is given by `basis` (typically `O_K`).
    pub fn minimal_order(minpoly: BiPoly, basis: Vec<Vec<Poly>>, conductor: &Poly, imaginary: bool) -> Result<Self> {
        let r = basis.len();
        let ctx = minpoly.lc().lc().ctx().clone();
        let z = zero_a(&ctx);
        let mut rows: Vec<Vec<Poly>> = vec![(0..r).map(|j| if j == 0 { z.one_like() } else { z.clone() }).collect()];
        for row in &basis {
            rows.push(row.iter().map(|c| c.clone() * conductor.clone()).collect());
        }
        let (h, _) = Matrix::from_rows(rows)?.hermite_normal_form();
        let rows = h.to_rows().into_iter().take(r).collect();
        OrderSpec::new(minpoly, rows, imaginary)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn minpoly(&self) -> &BiPoly {
        &self.minpoly
    }

    pub fn basis(&self) -> &Matrix<Poly> {
        &self.basis
    }

    fn to_bipoly(&self, v: &[Poly]) -> BiPoly {
        UPoly::new(v.to_vec(), zero_a(&self.ctx))
    }

    fn power_coords(&self, f: &BiPoly) -> Vec<Poly> {
        (0..self.rank()).map(|i| f.coeff(i)).collect()
    }

    /// Product of two power-basis vectors, reduced mod `m`.
    fn mul_power(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let p = self.to_bipoly(a) * self.to_bipoly(b);
        let r = p.div_rem(&self.minpoly).expect("monic").1;
        self.power_coords(&r)
    }

    /// Power-basis coordinates of `Σ x_i ω_i`.
    pub fn to_power(&self, x: &[Poly]) -> Vec<Poly> {
        let r = self.rank();
        (0..r)
            .map(|j| {
                (0..r).fold(zero_a(&self.ctx), |acc, i| {
                    acc + x[i].clone() * self.basis.get(i, j).clone()
                })
            })
            .collect()
    }

    /// Coordinates in the order basis of a power-basis vector, if it lies in `O`.
    pub fn coords(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let r = self.rank();
        // y·H = v with H upper triangular, then x = y·U
        let mut rest = v.to_vec();
        let mut y = vec![zero_a(&self.ctx); r];
        for i in 0..r {
            let piv = self.hnf.get(i, i);
            let c = rest[i].exact_div(piv)?;
            for (j, rj) in rest.iter_mut().enumerate().skip(i) {
                *rj = rj.clone() - c.clone() * self.hnf.get(i, j).clone();
            }
            y[i] = c;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            (0..r)
                .map(|j| {
                    (0..r).fold(zero_a(&self.ctx), |acc, i| {
                        acc + y[i].clone() * self.hnf_u.get(i, j).clone()
                    })
                })
                .collect(),
        )
    }

    /// Product in `O`, in order coordinates.
    pub fn mul(&self, x: &[Poly], z: &[Poly]) -> Vec<Poly> {
        let p = self.mul_power(&self.to_power(x), &self.to_power(z));
        self.coords(&p).expect("order is closed under multiplication")
    }

    /// `Nm_{K/F}(u) = Res_y(m, u(y))`.
    pub fn norm_element(&self, x: &[Poly]) -> Result<Poly> {
        if x.iter().all(|c| c.is_zero()) {
            return Err(Error::invalid("norm of zero"));
        }
        let u = self.to_bipoly(&self.to_power(x));
        Ok(self.minpoly.resultant(&u))
    }

    /// `A`-generators `g·ω_j` of the ideal generated by `gens` (order coordinates), as columns.
    pub fn ideal_from_elements(&self, gens: &[Vec<Poly>]) -> IdealPresentation {
        let r = self.rank();
        let mut cols = Vec::new();
        for g in gens {
            for j in 0..r {
                let mut e = vec![zero_a(&self.ctx); r];
                e[j] = e[j].one_like();
                cols.push(self.mul(g, &e));
            }
        }
        IdealPresentation { columns: cols }
    }

    pub fn to_json(&self) -> Result<Value> {
        let basis: Vec<Vec<Value>> = self
            .basis
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|c| poly_json(c, &self.ctx)).collect())
            .collect();
        Ok(json!({
            "minpoly": MPoly::from_nested(&self.minpoly, &self.ctx, &["y", "T"], vec!["T", "y"])?.to_json(),
            "basis": basis,
            "imaginary": self.imaginary,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw = v.get("minpoly").ok_or_else(|| Error::Parse("missing minpoly".into()))?;
        let mp = match raw {
            Value::String(s) => {
                let f = v
                    .get("field")
                    .ok_or_else(|| Error::Parse("a string minpoly needs a field".into()))?;
                MPoly::parse(s, &field_from_json(f)?, vec!["T", "y"])?
            }
            _ => MPoly::from_json(raw)?,
        };
        let ctx = mp.ctx().clone();
        let m: BiPoly = mp.with_vars(vec!["T", "y"])?.to_nested(&["y", "T"])?;
        let imaginary = v.get("imaginary").and_then(Value::as_bool).unwrap_or(false);
        match v.get("basis") {
            None | Some(Value::Null) => OrderSpec::power_basis(m, imaginary),
            Some(b) => {
                let rows = b
                    .as_array()
                    .ok_or_else(|| Error::Parse("basis must be an array".into()))?;
                let rows = rows
                    .iter()
                    .map(|row| parse_vector(row, &ctx))
                    .collect::<Result<Vec<_>>>()?;
                OrderSpec::new(m, rows, imaginary)
            }
        }
    }
}

/// An element of `A` in the canonical JSON format.
pub fn poly_json(c: &Poly, ctx: &Arc<FieldCtx>) -> Value {
    MPoly::from_nested(c, ctx, &["T"], vec!["T"])
        .expect("T is declared")
        .to_json()
}

/// An element of `A` from JSON: a polynomial object or a string like `"T^2+1"`.
pub fn parse_a(v: &Value, ctx: &Arc<FieldCtx>) -> Result<Poly> {
    let m = match v {
        Value::String(s) => MPoly::parse(s, ctx, vec!["T"])?,
        Value::Number(_) => MPoly::parse(&v.to_string(), ctx, vec!["T"])?,
        _ => MPoly::from_json_in(v, ctx)?.with_vars(vec!["T"])?,
    };
    m.to_nested(&["T"])
}

pub fn parse_vector(v: &Value, ctx: &Arc<FieldCtx>) -> Result<Vec<Poly>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of polynomials".into()))?
        .iter()
        .map(|c| parse_a(c, ctx))
        .collect()
}

/// `true` iff the gcd of the coordinates is a unit of `A`.
pub fn is_primitive(x: &[Poly]) -> Result<bool> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::invalid("zero element"));
    }
    let g = x.iter().fold(x[0].zero_like(), |a, c| a.gcd(c));
    Ok(g.deg() == 0)
}

/// An ideal by `A`-generators, each a column of order coordinates.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    pub columns: Vec<Vec<Poly>>,
}

impl IdealPresentation {
    pub fn matrix(&self) -> Result<Matrix<Poly>> {
        let r = self.columns.first().map_or(0, |c| c.len());
        if r == 0 {
            return Err(Error::NotAnIdeal("no generators".into()));
        }
        let rows = (0..r)
            .map(|i| self.columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    /// Invariant factors of `O/𝔞`.
    pub fn invariant_factors(&self) -> Result<Vec<Poly>> {
        let s = self.matrix()?.smith_normal_form();
        let d = s.invariant_factors();
        if d.len() < self.columns[0].len() || d.iter().any(|x| x.is_zero()) {
            return Err(Error::NotAnIdeal("generators do not span a full-rank lattice".into()));
        }
        Ok(d)
    }

    /// `N(𝔞) = ∏ d_i`, monic.
    pub fn fitting_norm(&self) -> Result<Poly> {
        let d = self.invariant_factors()?;
        Ok(d.into_iter().reduce(|a, b| a * b).expect("nonempty").normalized())
    }

    /// Product ideal, by pairwise products of `A`-generators.
    pub fn product(&self, other: &Self, spec: &OrderSpec) -> Self {
        let mut cols = Vec::new();
        for a in &self.columns {
            for b in &other.columns {
                cols.push(spec.mul(a, b));
            }
        }
        IdealPresentation { columns: cols }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaResult {
    pub count: u64,
    /// One representative per `F_q^*`-orbit, in order coordinates.
    pub witnesses: Vec<Vec<Poly>>,
    /// `false`: only a lower bound (the search bound was not certified complete).
    pub exact: bool,
}

impl GammaResult {
    pub fn to_json(&self, ctx: &Arc<FieldCtx>) -> Value {
        json!({
            "count": self.count,
            "exact": self.exact,
            "tag": if self.exact { "exact" } else { "lower bound" },
            "witnesses": self.witnesses.iter().map(|w| w.iter().map(|c| c.pretty(&["T"])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "field": crate::mpoly::field_json(ctx),
        })
    }
}

/// All polynomials of degree `≤ b`, indexed `0..q^{b+1}`.
fn poly_from_index(ctx: &Arc<FieldCtx>, mut idx: u64, b: usize) -> Poly {
    let q = ctx.q();
    let c = (0..=b)
        .map(|_| {
            let v = Fq::from_index(ctx, idx % q);
            idx /= q;
            v
        })
        .collect();
    UPoly::new(c, Fq::zero(ctx))
}

/// Counts `F_q^*`-orbits of primitive `u = Σ x_i ω_i` with `deg x_i ≤ bound`
/// (default `deg a`) and `Nm(u) ∈ F_q^*·a`. The count is exact only when
/// `bound` reaches the caller's `certified` completeness bound.
pub fn gamma_count(spec: &OrderSpec, a: &Poly, bound: Option<usize>, certified: Option<usize>) -> Result<GammaResult> {
    let da = a.degree().ok_or_else(|| Error::invalid("a must be nonzero"))?;
    let bound = bound.unwrap_or(da);
    if bound < da {
        return Err(Error::invalid("bound must be at least deg a"));
    }
    if !is_irreducible(a, 12)? {
        return Err(Error::NotPrime(a.pretty(&["T"])));
    }
    let target = a.normalized();
    let r = spec.rank();
    let per = spec
        .ctx
        .q()
        .checked_pow(bound as u32 + 1)
        .ok_or_else(|| Error::TooLarge("search box".into()))?;
    let total = per.checked_pow(r as u32).filter(|&t| t <= 50_000_000);
    let total = total.ok_or_else(|| Error::TooLarge(format!("search box of size {per}^{r}")))?;
    let ctx = spec.ctx.clone();
    let mut hits: Vec<Vec<Poly>> = (1..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let x: Vec<Poly> = (0..r)
                .map(|_| {
                    let c = poly_from_index(&ctx, idx % per, bound);
                    idx /= per;
                    c
                })
                .collect();
            // canonical orbit representative: first nonzero coordinate monic
            let first = x.iter().find(|c| !c.is_zero())?;
            if !first.lc().is_one() || !is_primitive(&x).ok()? {
                return None;
            }
            let n = spec.norm_element(&x).ok()?;
            (n.deg() >= 0 && n.normalized() == target).then_some(x)
        })
        .collect();
    hits.sort_by_key(|x| {
        x.iter()
            .map(|c| c.coeffs().iter().map(Fq::index).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    let exact = certified.is_some_and(|c| bound >= c);
    Ok(GammaResult {
        count: hits.len() as u64,
        witnesses: hits,
        exact,
    })
}

/// Outcome of the integrality and degree-accounting checks on `Φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertReport {
    pub degree: usize,
    pub integral: bool,
    /// `Σ γ·deg H = deg Φ` when a list of orders is supplied.
    pub degree_check: Option<bool>,
}

/// `phi` monic in `X` over `F_q(T)`; `orders` lists `(γ, deg H)` pairs.
pub fn hilbert_consistency(phi: &UPoly<FqT>, orders: &[(u64, u64)]) -> Result<HilbertReport> {
    if phi.is_zero() || !phi.lc().is_one() {
        return Err(Error::invalid("Φ must be monic in X"));
    }
    for (i, c) in phi.coeffs().iter().enumerate() {
        if c.as_integral().is_none() {
            return Err(Error::IntegralityViolation(format!(
                "coefficient of X^{i} is {}",
                c.pretty(&["T"])
            )));
        }
    }
    let degree = phi.degree().expect("nonzero");
    let degree_check = (!orders.is_empty()).then(|| orders.iter().map(|(g, d)| g * d).sum::<u64>() == degree as u64);
    Ok(HilbertReport {
        degree,
        integral: true,
        degree_check,
    })
}

/// `Φ` over `A` viewed over `F_q(T)`.
pub fn lift_to_fqt(phi: &BiPoly) -> UPoly<FqT> {
    let z = Frac::from_ring(phi.coeff_zero().clone());
    phi.map(&z, |c| Frac::from_ring(c.clone()))
}
