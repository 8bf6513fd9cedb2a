//! Weighted polynomial rings, sparse polynomials and polynomial matrices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::GradedError;
use crate::rational::Rational;

pub type Exponent = Vec<u32>;

/// `k[x_1..x_n]` with `x_j` of degree `c_j > 0`. The generator weights of
/// free modules use the same units: `x^α e` has weight `wt(e) + deg(α)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedRing {
    weights: Vec<i64>,
}

impl WeightedRing {
    pub fn new(weights: Vec<i64>) -> Result<Self, GradedError> {
        if weights.is_empty() {
            return Err(GradedError::InvalidRing("at least one variable is required".into()));
        }
        if let Some(c) = weights.iter().find(|&&c| c <= 0) {
            return Err(GradedError::InvalidRing(format!("variable weight {c} is not positive")));
        }
        Ok(Self { weights })
    }

    pub fn standard(n: usize) -> Self {
        Self { weights: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Window width: the total weight of all variables.
    pub fn eta(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn degree(&self, exp: &[u32]) -> i64 {
        exp.iter().zip(&self.weights).map(|(&a, &c)| i64::from(a) * c).sum()
    }

    /// All exponents of the given degree, in lexicographic order.
    pub fn monomials(&self, degree: i64) -> Vec<Exponent> {
        fn rec(w: &[i64], left: i64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
            let j = cur.len();
            if j == w.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut a = 0;
            while i64::from(a) * w[j] <= left {
                cur.push(a);
                rec(w, left - i64::from(a) * w[j], cur, out);
                cur.pop();
                a += 1;
            }
        }
        let mut out = Vec::new();
        if degree >= 0 {
            rec(&self.weights, degree, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn variable(n: usize, j: usize) -> Self {
        let mut exp = vec![0; n];
        exp[j] = 1;
        Self::monomial(exp, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .next()
            .filter(|(e, _)| e.iter().all(|&a| a == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Whether every term has the given degree (the zero polynomial is
    /// homogeneous of every degree).
    pub fn is_homogeneous(&self, ring: &WeightedRing, degree: i64) -> bool {
        self.terms.keys().all(|e| e.len() == ring.n() && ring.degree(e) == degree)
    }
}

/// Dense matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(size: usize, n: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Poly::one(n));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<Poly> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * cols, "ragged polynomial matrix");
        Self { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Poly {
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let prod = a.mul(b);
                        out.entry_mut(i, j).add_assign(&prod);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|p| p.scale(s)).collect() }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// `[[a, b], [c, d]]`; blocks must have compatible shapes.
    pub fn block(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> PolyMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = PolyMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        for (m, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for r in 0..m.rows {
                for col in 0..m.cols {
                    out.set(r0 + r, c0 + col, m.get(r, col).clone());
                }
            }
        }
        out
    }

    /// Constant parts of the entries as a rational matrix.
    pub fn constant_parts(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).constant_term()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn monomial_enumeration() {
        let ring = WeightedRing::new(vec![1, 2]).unwrap();
        assert_eq!(ring.monomials(3), vec![vec![1, 1], vec![3, 0]]);
        assert_eq!(WeightedRing::standard(3).monomials(2).len(), 6);
        assert!(ring.monomials(-1).is_empty());
        assert!(WeightedRing::new(vec![1, 0]).is_err());
    }

    #[test]
    fn polynomial_arithmetic() {
        let x = Poly::variable(2, 0);
        let y = Poly::variable(2, 1);
        let s = x.add(&y);
        let d = x.sub(&y);
        let prod = s.mul(&d);
        assert_eq!(prod.coefficient(&[2, 0]), int(1));
        assert_eq!(prod.coefficient(&[1, 1]), int(0));
        assert_eq!(prod.coefficient(&[0, 2]), int(-1));
        assert!(x.sub(&x).is_zero());
        assert_eq!(Poly::constant(2, int(5)).add(&x).constant_term(), int(5));
        assert!(prod.is_homogeneous(&WeightedRing::standard(2), 2));
    }

    #[test]
    fn matrix_products() {
        let x = Poly::variable(2, 0);
        let y = Poly::variable(2, 1);
        let row = PolyMatrix::from_rows(vec![vec![x.clone(), y.clone()]], 2);
        let col = PolyMatrix::from_rows(vec![vec![y], vec![x.neg()]], 1);
        assert!(row.mul(&col).is_zero());
        assert_eq!(row.transpose().rows(), 2);
    }
}
