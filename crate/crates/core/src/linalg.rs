//! Dense matrices over a ring: Bareiss determinant, characteristic
//! polynomials over fields, Smith and Hermite normal forms over Euclidean
//! domains.

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::ring::{EuclideanDomain, Field, GcdDomain, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    a: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
            return Err(Error::invalid("matrix rows must be nonempty and of equal length"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize, like: &R) -> Self {
        Matrix {
            rows,
            cols,
            a: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, like: &R) -> Self {
        let mut m = Matrix::zeros(n, n, like);
        for i in 0..n {
            m.set(i, i, like.one_like());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows, &self.a[0]);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::invalid("matrix dimensions do not match"));
        }
        let mut m = Matrix::zeros(self.rows, o.cols, &self.a[0]);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = self.a[0].zero_like();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * o.get(k, j).clone();
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.a.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.a.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row_i ← row_i + f·row_j`.
    fn add_row(&mut self, i: usize, j: usize, f: &R) {
        for c in 0..self.cols {
            let v = self.get(i, c).clone() + f.clone() * self.get(j, c).clone();
            self.set(i, c, v);
        }
    }

    /// `col_i ← col_i + f·col_j`.
    fn add_col(&mut self, i: usize, j: usize, f: &R) {
        for r in 0..self.rows {
            let v = self.get(r, i).clone() + self.get(r, j).clone() * f.clone();
            self.set(r, i, v);
        }
    }

    fn scale_row(&mut self, i: usize, f: &R) {
        for c in 0..self.cols {
            let v = self.get(i, c).clone() * f.clone();
            self.set(i, c, v);
        }
    }
}

impl<R: GcdDomain> Matrix<R> {
    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<R> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = self.a[0].one_like();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(self.a[0].zero_like());
                };
                m.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m.get(k, k).clone() * m.get(i, j).clone() - m.get(i, k).clone() * m.get(k, j).clone();
                    m.set(i, j, v.try_div(&prev).expect("Bareiss division is exact"));
                }
                m.set(i, k, self.a[0].zero_like());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign { -d } else { d })
    }
}

impl<K: Field> Matrix<K> {
    /// Characteristic polynomial `det(X·I − M)` via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Result<UPoly<K>> {
        if self.rows != self.cols {
            return Err(Error::invalid("characteristic polynomial of a non-square matrix"));
        }
        let n = self.rows;
        let zero = self.a[0].zero_like();
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                h.swap_cols(i, m);
            }
            let piv_inv = h.get(m, m - 1).inv().expect("nonzero pivot");
            for i in m + 1..n {
                let u = h.get(i, m - 1).clone() * piv_inv.clone();
                if u.is_zero() {
                    continue;
                }
                h.add_row(i, m, &(-u.clone()));
                h.add_col(m, i, &u);
            }
        }
        // p_k = (X − h_kk) p_{k−1} − Σ_{i<k} h_ik (∏_{j=i+1}^{k} h_{j,j−1}) p_{i−1}
        let x = UPoly::var(&zero);
        let mut ps: Vec<UPoly<K>> = vec![UPoly::constant(zero.one_like())];
        for k in 0..n {
            let mut pk = (x.clone() - UPoly::constant(h.get(k, k).clone())) * ps[k].clone();
            let mut t = zero.one_like();
            for i in (0..k).rev() {
                t = t * h.get(i + 1, i).clone();
                let c = t.clone() * h.get(i, k).clone();
                pk = pk - ps[i].scale(&c);
            }
            ps.push(pk);
        }
        Ok(ps.pop().expect("nonempty"))
    }
}

/// `U·M·V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Smith<R: Ring> {
    pub u: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
}

impl<R: EuclideanDomain> Smith<R> {
    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn invariant_factors(&self) -> Vec<R> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

fn smaller<R: EuclideanDomain>(a: &R, b: &R) -> bool {
    match (a.euclid_degree(), b.euclid_degree()) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

impl<R: EuclideanDomain> Matrix<R> {
    pub fn smith_normal_form(&self) -> Smith<R> {
        let like = self.a[0].clone();
        let mut d = self.clone();
        let mut u = Matrix::identity(self.rows, &like);
        let mut v = Matrix::identity(self.cols, &like);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            // pivot: smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    let e = d.get(i, j);
                    if !e.is_zero() && best.is_none_or(|(bi, bj)| smaller(e, d.get(bi, bj))) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..self.rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (qt, r) = d.get(i, t).div_rem(d.get(t, t));
                let f = -qt;
                d.add_row(i, t, &f);
                u.add_row(i, t, &f);
                clean &= r.is_zero();
            }
            for j in t + 1..self.cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (qt, r) = d.get(t, j).div_rem(d.get(t, t));
                let f = -qt;
                d.add_col(j, t, &f);
                v.add_col(j, t, &f);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let piv = d.get(t, t).clone();
            let bad = (t + 1..self.rows)
                .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).div_rem(&piv).1.is_zero());
            if let Some((i, _)) = bad {
                let one = like.one_like();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            let unit = piv.unit_part();
            if !unit.is_one() {
                let uinv = like.one_like().try_div(&unit).expect("unit");
                d.scale_row(t, &uinv);
                u.scale_row(t, &uinv);
            }
            t += 1;
        }
        Smith { u, d, v }
    }

    /// Row-style Hermite normal form `H = U·M`: upper triangular, pivots
    /// normalized, entries above a pivot reduced modulo it.
    pub fn hermite_normal_form(&self) -> (Matrix<R>, Matrix<R>) {
        let like = self.a[0].clone();
        let mut h = self.clone();
        let mut u = Matrix::identity(self.rows, &like);
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in row..self.rows {
                    let e = h.get(i, col);
                    if !e.is_zero() && best.is_none_or(|b| smaller(e, h.get(b, col))) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(row, b);
                u.swap_rows(row, b);
                let mut done = true;
                for i in row + 1..self.rows {
                    if h.get(i, col).is_zero() {
                        continue;
                    }
                    let (qt, r) = h.get(i, col).div_rem(h.get(row, col));
                    h.add_row(i, row, &(-qt.clone()));
                    u.add_row(i, row, &(-qt));
                    done &= r.is_zero();
                }
                if done {
                    break;
                }
            }
            if h.get(row, col).is_zero() {
                continue;
            }
            let unit = h.get(row, col).unit_part();
            if !unit.is_one() {
                let uinv = like.one_like().try_div(&unit).expect("unit");
                h.scale_row(row, &uinv);
                u.scale_row(row, &uinv);
            }
            for i in 0..row {
                let (qt, _) = h.get(i, col).div_rem(h.get(row, col));
                if !qt.is_zero() {
                    h.add_row(i, row, &(-qt.clone()));
                    u.add_row(i, row, &(-qt));
                }
            }
            row += 1;
        }
        (h, u)
    }
}
