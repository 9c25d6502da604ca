//! Dense Gaussian elimination over a [`FieldSpec`] on raw element encodings.

use crate::field::FieldSpec;

/// Reduced row-echelon form with zero rows dropped. Returns the reduced
/// rows and their pivot columns. The result depends only on the row space.
pub fn rref(field: &FieldSpec, rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    if rows.is_empty() {
        return (rows, Vec::new());
    }
    if field.order() == 2 {
        return rref_binary(rows);
    }
    let ncols = rows[0].len();
    let mut rows = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv_raw(rows[r][col]);
        if inv != 1 {
            for x in rows[r].iter_mut().skip(col) {
                *x = field.mul_raw(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = field.neg_raw(row[col]);
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if y != 0 {
                    *x = field.add_raw(*x, field.mul_raw(factor, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn rref_binary(rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let ncols = rows[0].len();
    let words = ncols.div_ceil(64);
    let mut packed: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut w = vec![0u64; words];
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == packed.len() {
            break;
        }
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(sel) = (r..packed.len()).find(|&i| packed[i][wi] & bit != 0) else {
            continue;
        };
        packed.swap(r, sel);
        let pivot_row = packed[r].clone();
        for (i, row) in packed.iter_mut().enumerate() {
            if i != r && row[wi] & bit != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(wi) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    packed.truncate(r);
    let out = packed
        .into_iter()
        .map(|w| (0..ncols).map(|j| ((w[j / 64] >> (j % 64)) & 1) as u32).collect())
        .collect();
    (out, pivots)
}

pub fn rank(field: &FieldSpec, rows: Vec<Vec<u32>>) -> usize {
    rref(field, rows).1.len()
}

/// Reduce `v` against a matrix already in reduced row-echelon form.
pub fn reduce(field: &FieldSpec, basis: &[Vec<u32>], pivots: &[usize], v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    for (row, &col) in basis.iter().zip(pivots) {
        let c = v[col];
        if c == 0 {
            continue;
        }
        let factor = field.neg_raw(c);
        for (x, &y) in v.iter_mut().zip(row).skip(col) {
            if y != 0 {
                *x = field.add_raw(*x, field.mul_raw(factor, y));
            }
        }
    }
    v
}

/// Solve `sum_j x_j * columns[j] = target` over `F_p`. Returns `None` if
/// inconsistent; free variables (if any) are set to zero.
pub fn solve_mod_p(columns: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let nvars = columns.len();
    let neq = target.len();
    let p64 = p as u64;
    // Augmented matrix, one row per equation.
    let mut m: Vec<Vec<u64>> = (0..neq)
        .map(|i| {
            let mut row: Vec<u64> = columns.iter().map(|c| c[i] as u64).collect();
            row.push(target[i] as u64);
            row
        })
        .collect();
    let inv = |a: u64| crate::arith::pow_mod(a, p64 - 2, p64);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(sel) = (r..neq).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, sel);
        let iv = inv(m[r][col]);
        for x in m[r].iter_mut() {
            *x = *x * iv % p64;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p64 * p64 - f * y) % p64;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == neq {
            break;
        }
    }
    if m[r..].iter().any(|row| row[nvars] != 0) {
        return None;
    }
    let mut sol = vec![0u32; nvars];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = m[i][nvars] as u32;
    }
    Some(sol)
}
