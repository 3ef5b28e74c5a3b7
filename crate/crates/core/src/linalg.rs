//! Dense Gaussian elimination over a [`Field`].

use crate::ff::{Elem, Field};

/// Reduced row-echelon form in place; returns the pivot column of each
/// nonzero row, in row order. Zero rows are moved to the bottom.
pub fn rref(f: &Field, m: &mut [Vec<Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(sel) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, sel);
        let inv = f.inv(m[row][col]).expect("pivot is nonzero");
        for c in m[row].iter_mut() {
            *c = f.mul(*c, inv);
        }
        for i in 0..rows {
            if i == row || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col];
            for c in 0..cols {
                let delta = f.mul(factor, m[row][c]);
                m[i][c] = f.sub(m[i][c], delta);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(f: &Field, mut m: Vec<Vec<Elem>>) -> usize {
    rref(f, &mut m).len()
}

/// Determinant of a square matrix.
pub fn det(f: &Field, mut m: Vec<Vec<Elem>>) -> Elem {
    let n = m.len();
    let mut acc = f.one();
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return f.zero();
        };
        if sel != col {
            m.swap(sel, col);
            acc = f.neg(acc);
        }
        let pivot = m[col][col];
        acc = f.mul(acc, pivot);
        let inv = f.inv(pivot).expect("pivot is nonzero");
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = f.mul(m[i][col], inv);
            for c in col..n {
                let delta = f.mul(factor, m[col][c]);
                m[i][c] = f.sub(m[i][c], delta);
            }
        }
    }
    acc
}

pub fn mat_mul(f: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(f.zero(), |acc, k| f.add(acc, f.mul(row[k], b[k][c]))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(f: &Field, rows: &[&[i64]]) -> Vec<Vec<Elem>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| f.from_int(v)).collect())
            .collect()
    }

    #[test]
    fn det_3x3_by_hand() {
        let f = Field::prime(7).unwrap();
        // det [[2,0,1],[1,3,2],[1,1,1]] = 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(
            det(&f, mat(&f, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])),
            f.zero()
        );
        // det [[1,2],[3,4]] = -2 = 5 mod 7
        assert_eq!(det(&f, mat(&f, &[&[1, 2], &[3, 4]])), f.from_int(5));
    }

    #[test]
    fn rank_and_pivots() {
        let f = Field::prime(5).unwrap();
        let mut m = mat(&f, &[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]]);
        assert_eq!(rref(&f, &mut m), vec![0, 1]);
        assert_eq!(rank(&f, mat(&f, &[&[1, 1], &[1, 1]])), 1);
    }
}
