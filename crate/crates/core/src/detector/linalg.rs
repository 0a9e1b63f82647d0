//! Small dense helpers. Matrices are row-major `Vec<Vec<f64>>`.

pub(crate) type Matrix = Vec<Vec<f64>>;

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix, or `None` if a pivot is not comfortably positive.
pub(crate) fn cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let scale = (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if !(d > scale * 1e-14) {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

pub(crate) fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    x
}

pub(crate) fn spd_inverse(a: &Matrix) -> Option<Matrix> {
    let l = cholesky(a)?;
    let n = a.len();
    let mut inv = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = cholesky_solve(&l, &e);
        for i in 0..n {
            inv[i][j] = col[i];
        }
    }
    Some(inv)
}

/// Coefficient of determination of `y` regressed on `columns` plus an
/// intercept, by modified Gram-Schmidt. Columns that are numerically
/// dependent on earlier ones are skipped.
pub(crate) fn r_squared(y: &[f64], columns: &[&[f64]]) -> f64 {
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if tss == 0.0 {
        return 1.0;
    }
    // the intercept direction is handled by centering
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for col in columns {
        let m = col.iter().sum::<f64>() / n as f64;
        let mut v: Vec<f64> = col.iter().map(|x| x - m).collect();
        let original = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for q in &basis {
            let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= d * qi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if original == 0.0 || norm <= original * 1e-10 {
            continue;
        }
        basis.push(v.into_iter().map(|x| x / norm).collect());
    }
    let mut r: Vec<f64> = y.iter().map(|v| v - mean).collect();
    for q in &basis {
        let d: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
        for (ri, qi) in r.iter_mut().zip(q) {
            *ri -= d * qi;
        }
    }
    let rss: f64 = r.iter().map(|x| x * x).sum();
    (1.0 - rss / tss).clamp(0.0, 1.0)
}

pub(crate) fn column(rows: &Matrix, j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}
