//! Exact Gaussian elimination over [`ExactScalar`].

use crate::scalar::ExactScalar;

/// Reduced row-echelon form. Returns the pivot columns in order.
pub fn rref(m: &mut Vec<Vec<ExactScalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<ExactScalar>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of {x : M x = 0}.
pub fn nullspace(rows: &[Vec<ExactScalar>], ncols: usize) -> Vec<Vec<ExactScalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); ncols];
            v[f] = ExactScalar::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// Some solution of M x = b, if one exists.
pub fn solve(rows: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<ExactScalar>> = rows
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![ExactScalar::zero(); ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Incrementally maintained echelon basis; used when rows stream in.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(usize, Vec<ExactScalar>)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `row` against the basis; keeps it if independent. Returns true on rank increase.
    pub fn insert(&mut self, mut row: Vec<ExactScalar>) -> bool {
        for (pc, basis) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for (x, b) in row.iter_mut().zip(basis).skip(*pc) {
                if !b.is_zero() {
                    *x = &*x - &(&f * b);
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inverse().expect("nonzero pivot");
        for x in row.iter_mut().skip(pc) {
            *x = &*x * &inv;
        }
        self.rows.push((pc, row));
        true
    }
}
