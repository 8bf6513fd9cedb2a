//! Dense exact linear algebra over the rationals, plus a small prime-field
//! rank routine used as a fast one-sided certificate.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row-reduces `m` in place to reduced row echelon form over the first
/// `ncols` columns and returns the pivot columns. Rows beyond the rank are
/// left as zero rows at the bottom.
pub fn rref(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d = &*d - &factor * s;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `rows · x = rhs`; returns a particular solution and a basis of the
/// homogeneous solutions, or `None` when inconsistent.
pub fn solve_affine(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    ncols: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = aug[r][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -aug[r][f].clone();
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

/// Solves a square nonsingular system.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let (x, kernel) = solve_affine(a, b, n)?;
    kernel.is_empty().then_some(x)
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}

/// Incremental sparse elimination for homogeneous systems `Σ c_v x_v = 0`.
/// Rows are reduced against earlier pivots as they are added.
#[derive(Debug, Default, Clone)]
pub struct SparseSystem {
    rows: Vec<(usize, BTreeMap<usize, Rational>)>,
    pivot_row: BTreeMap<usize, usize>,
}

impl SparseSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, var: usize) -> bool {
        self.pivot_row.contains_key(&var)
    }

    pub fn add_equation(&mut self, mut row: BTreeMap<usize, Rational>) {
        row.retain(|_, c| !c.is_zero());
        while let Some((&var, _)) = row.iter().find(|(v, _)| self.pivot_row.contains_key(v)) {
            let (_, pivot) = &self.rows[self.pivot_row[&var]];
            let factor = row[&var].clone();
            for (v, c) in pivot {
                let entry = row.entry(*v).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    row.remove(v);
                }
            }
        }
        let Some((&var, lead)) = row.iter().next() else { return };
        let inv = Rational::one() / lead;
        for c in row.values_mut() {
            *c *= &inv;
        }
        self.pivot_row.insert(var, self.rows.len());
        self.rows.push((var, row));
    }

    /// Completes values for the free variables into a solution. `free`
    /// supplies the value of each non-pivot variable.
    pub fn solve(&self, nvars: usize, mut free: impl FnMut(usize) -> Rational) -> Vec<Rational> {
        let mut x: Vec<Option<Rational>> = vec![None; nvars];
        for (v, slot) in x.iter_mut().enumerate() {
            if !self.is_pivot(v) {
                *slot = Some(free(v));
            }
        }
        // Later rows never mention earlier pivots, so solve newest first.
        for (pivot, row) in self.rows.iter().rev() {
            let mut value = Rational::zero();
            for (v, c) in row {
                if v != pivot {
                    value -= c * x[*v].as_ref().expect("solved in reverse order");
                }
            }
            x[*pivot] = Some(value);
        }
        x.into_iter().map(|v| v.expect("every variable assigned")).collect()
    }
}

/// Prime used for modular rank estimates.
pub const MODULUS: u64 = 2_147_483_647;

pub fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % MODULUS;
        }
        base = base * base % MODULUS;
        exp >>= 1;
    }
    acc
}

/// Reduces a rational mod [`MODULUS`]; `None` if the denominator vanishes.
pub fn rational_mod(q: &Rational) -> Option<u64> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let p = BigInt::from(MODULUS);
    let reduce = |x: &BigInt| -> u64 {
        let r = ((x % &p) + &p) % &p;
        r.to_u64().unwrap_or(0)
    };
    let d = reduce(q.denom());
    if d == 0 {
        return None;
    }
    Some(reduce(q.numer()) * inv_mod(d) % MODULUS)
}

/// Rank over the prime field. Never exceeds the rational rank of any
/// rational matrix reducing to `m`.
pub fn rank_mod(mut m: Vec<Vec<u64>>, ncols: usize) -> usize {
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = inv_mod(m[row][col]);
        for x in m[row].iter_mut() {
            *x = *x * inv % MODULUS;
        }
        for r in row + 1..m.len() {
            let f = m[r][col];
            if f == 0 {
                continue;
            }
            for c in col..ncols {
                let sub = f * m[row][c] % MODULUS;
                m[r][c] = (m[r][c] + MODULUS - sub) % MODULUS;
            }
        }
        row += 1;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn affine_solutions() {
        let m = mat(&[&[1, 1]]);
        let (x, k) = solve_affine(&m, &[int(1)], 2).unwrap();
        assert_eq!(mat_vec(&m, &x), vec![int(1)]);
        assert_eq!(k.len(), 1);
        let bad = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve_affine(&bad, &[int(1), int(3)], 2).is_none());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[1, 2]])), int(3));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn sparse_solutions_satisfy_the_system() {
        let mut sys = SparseSystem::new();
        sys.add_equation(BTreeMap::from([(0, int(1)), (1, int(-1))]));
        sys.add_equation(BTreeMap::from([(1, int(2)), (2, int(-1))]));
        sys.add_equation(BTreeMap::from([(0, int(2)), (2, int(-1))]));
        assert_eq!(sys.rank(), 2);
        let x = sys.solve(3, |_| int(3));
        assert_eq!(&x[0] - &x[1], int(0));
        assert_eq!(int(2) * &x[1] - &x[2], int(0));
    }

    #[test]
    fn modular_rank_matches_rational_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let mm = m
            .iter()
            .map(|r| r.iter().map(|x| rational_mod(x).unwrap()).collect())
            .collect();
        assert_eq!(rank_mod(mm, 3), 2);
        assert_eq!(rational_mod(&ratio(1, 2)).unwrap() * 2 % MODULUS, 1);
        assert_eq!(rational_mod(&int(-1)).unwrap(), MODULUS - 1);
    }
}
