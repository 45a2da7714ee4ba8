//! Integer vectors and matrices over coordinate lattices.
//!
//! Matrices are row-major and act on column vectors.

use num_integer::Integer;

pub type IVec = Vec<i64>;
pub type IMat = Vec<Vec<i64>>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn zero_vec(n: usize) -> IVec {
    vec![0; n]
}

pub fn unit_vec(n: usize, i: usize) -> IVec {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(k: i64, a: &[i64]) -> IVec {
    a.iter().map(|x| k * x).collect()
}

pub fn neg(a: &[i64]) -> IVec {
    a.iter().map(|x| -x).collect()
}

/// `a + k * b`
pub fn axpy(a: &[i64], k: i64, b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn transpose(m: &IMat) -> IMat {
    if m.is_empty() {
        return Vec::new();
    }
    let (r, c) = (m.len(), m[0].len());
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

pub fn mat_vec(m: &IMat, v: &[i64]) -> IVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[IVec], rows: usize) -> IMat {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Determinant by fraction-free elimination.
pub fn det(m: &IMat) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular integer matrix, or `None` if `|det| != 1`.
pub fn unimodular_inverse(m: &IMat) -> Option<IMat> {
    let n = m.len();
    let d = det(m);
    if d.abs() != 1 {
        return None;
    }
    // Adjugate via cofactors; fine for the small sizes in use.
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IMat = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = s * det(&minor) * d;
        }
    }
    Some(inv)
}

/// Column-style echelon form: returns `(h, u)` with `a * u = h`, `u` unimodular,
/// and the list of pivot `(row, column)` positions of `h`.
fn column_echelon(a: &[Vec<i128>], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<(usize, usize)>) {
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut k = 0;
    let col_op = |h: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, p: usize, q: usize, coef: [i128; 4]| {
        // (col p, col q) <- (coef0*p + coef1*q, coef2*p + coef3*q)
        for row in h.iter_mut().chain(u.iter_mut()) {
            let (x, y) = (row[p], row[q]);
            row[p] = coef[0] * x + coef[1] * y;
            row[q] = coef[2] * x + coef[3] * y;
        }
    };
    for r in 0..h.len() {
        if k == ncols {
            break;
        }
        for j in k + 1..ncols {
            if h[r][j] == 0 {
                continue;
            }
            let (x, y) = (h[r][k], h[r][j]);
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            col_op(&mut h, &mut u, k, j, [eg.x, eg.y, -y / g, x / g]);
        }
        if h[r][k] != 0 {
            if h[r][k] < 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[k] = -row[k];
                }
            }
            pivots.push((r, k));
            k += 1;
        }
    }
    (h, u, pivots)
}

/// Row Hermite normal form of a list of vectors (canonical basis of the lattice they span).
pub fn row_hnf(vectors: &[IVec]) -> Vec<IVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let mut rows: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut col = 0;
    while col < n && !rows.is_empty() {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pv = rows[p][col];
            for &i in &nz {
                if i != p {
                    let q = Integer::div_floor(&rows[i][col], &pv);
                    let pr = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut r = rows.remove(p);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            for prev in out.iter_mut() {
                let q = Integer::div_floor(&prev[col], &r[col]);
                for (x, y) in prev.iter_mut().zip(&r) {
                    *x -= q * y;
                }
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        col += 1;
    }
    out.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

/// Integer basis (in row Hermite form) of `{c in Z^ncols : <r, c> = 0 for all r in rows}`.
pub fn integer_kernel(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    let a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (_, u, pivots) = column_echelon(&a, ncols);
    let rank = pivots.len();
    let basis: Vec<IVec> = (rank..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j] as i64).collect())
        .collect();
    row_hnf(&basis)
}

/// Integer solutions of `a x = b`: a particular solution plus a kernel basis.
pub fn solve_integer(a: &[IVec], b: &[i64], ncols: usize) -> Option<(IVec, Vec<IVec>)> {
    let a128: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (h, u, pivots) = column_echelon(&a128, ncols);
    let mut y = vec![0i128; ncols];
    for &(r, k) in &pivots {
        let partial: i128 = (0..k).map(|j| h[r][j] * y[j]).sum();
        let rhs = b[r] as i128 - partial;
        if rhs % h[r][k] != 0 {
            return None;
        }
        y[k] = rhs / h[r][k];
    }
    for (r, row) in h.iter().enumerate() {
        let lhs: i128 = row.iter().zip(&y).map(|(p, q)| p * q).sum();
        if lhs != b[r] as i128 {
            return None;
        }
    }
    let x: IVec = (0..ncols)
        .map(|i| (0..ncols).map(|j| u[i][j] * y[j]).sum::<i128>() as i64)
        .collect();
    let rank = pivots.len();
    let kernel = (rank..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j] as i64).collect())
        .collect();
    Some((x, row_hnf_keep(kernel)))
}

fn row_hnf_keep(v: Vec<IVec>) -> Vec<IVec> {
    if v.is_empty() {
        v
    } else {
        row_hnf(&v)
    }
}

/// Rank over the rationals.
pub fn rank(rows: &[IVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    column_echelon(&a, rows[0].len()).2.len()
}
