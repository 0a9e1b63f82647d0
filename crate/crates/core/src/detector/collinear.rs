use serde::{Deserialize, Serialize};

use super::linalg::{column, pearson, r_squared, Matrix};
use super::DetectorError;

/// Column means and population standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Columns with no spread: centered only, std recorded as 1.
    pub zero_variance: Vec<bool>,
}

impl Standardizer {
    pub fn fit(rows: &Matrix) -> Result<Self, DetectorError> {
        let n = rows.len();
        if n < 2 {
            return Err(DetectorError::TooFewRows { rows: n, needed: 2 });
        }
        let d = rows[0].len();
        let mut means = vec![0.0; d];
        let mut stds = vec![1.0; d];
        let mut zero_variance = vec![false; d];
        for j in 0..d {
            let col = column(rows, j);
            let m = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
            means[j] = m;
            if var.sqrt() <= 1e-12 * m.abs().max(1.0) {
                zero_variance[j] = true;
            } else {
                stds[j] = var.sqrt();
            }
        }
        Ok(Self {
            means,
            stds,
            zero_variance,
        })
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }

    pub fn transform(&self, rows: &Matrix) -> Matrix {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }
}

/// Z-scores every column. Returns the transformed rows and the fitted
/// parameters.
pub fn standardize(rows: &Matrix) -> Result<(Matrix, Standardizer), DetectorError> {
    let s = Standardizer::fit(rows)?;
    Ok((s.transform(rows), s))
}

/// `1 / (1 - R^2_j)` per column, regressing each column on all others plus
/// an intercept. Infinite when `R^2_j >= 1 - 1e-12`.
pub fn vif(rows: &Matrix) -> Result<Vec<f64>, DetectorError> {
    let d = rows.first().map_or(0, Vec::len);
    if rows.len() <= d {
        return Err(DetectorError::TooFewRows {
            rows: rows.len(),
            needed: d + 1,
        });
    }
    let cols: Vec<Vec<f64>> = (0..d).map(|j| column(rows, j)).collect();
    Ok((0..d)
        .map(|j| {
            let others: Vec<&[f64]> = (0..d)
                .filter(|&k| k != j)
                .map(|k| cols[k].as_slice())
                .collect();
            let r2 = r_squared(&cols[j], &others);
            if r2 >= 1.0 - 1e-12 {
                f64::INFINITY
            } else {
                1.0 / (1.0 - r2)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "trigger", rename_all = "snake_case")]
pub enum Trigger {
    ZeroVariance,
    Correlation { partner: String, r: f64 },
    Vif { vif: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub feature: String,
    #[serde(flatten)]
    pub trigger: Trigger,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pruning {
    /// Indices into the input columns, ascending.
    pub retained: Vec<usize>,
    pub log: Vec<Removal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneLimits {
    pub vif: f64,
    pub correlation: f64,
}

impl Default for PruneLimits {
    fn default() -> Self {
        Self {
            vif: 5.0,
            correlation: 0.95,
        }
    }
}

/// Drops constant columns, then repeatedly the later member of the most
/// correlated pair above `limits.correlation`, then repeatedly the highest
/// VIF column until every VIF is below `limits.vif` (the later column
/// loses ties).
pub fn prune_collinear(
    rows: &Matrix,
    names: &[String],
    limits: PruneLimits,
) -> Result<Pruning, DetectorError> {
    let d = names.len();
    let cols: Vec<Vec<f64>> = (0..d).map(|j| column(rows, j)).collect();
    let mut log = Vec::new();
    let mut retained: Vec<usize> = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let first = c.first().copied().unwrap_or(0.0);
        if c.iter().all(|&x| x == first) {
            log.push(Removal {
                feature: names[j].clone(),
                trigger: Trigger::ZeroVariance,
            });
        } else {
            retained.push(j);
        }
    }

    loop {
        let mut worst: Option<(f64, usize, usize)> = None;
        for (a, &i) in retained.iter().enumerate() {
            for &j in &retained[a + 1..] {
                let r = pearson(&cols[i], &cols[j]);
                if r.abs() > limits.correlation
                    && worst.map_or(true, |(w, _, _)| r.abs() > w.abs())
                {
                    worst = Some((r, i, j));
                }
            }
        }
        let Some((r, i, j)) = worst else { break };
        retained.retain(|&k| k != j);
        log.push(Removal {
            feature: names[j].clone(),
            trigger: Trigger::Correlation {
                partner: names[i].clone(),
                r,
            },
        });
    }

    while retained.len() > 1 {
        let sub: Matrix = rows
            .iter()
            .map(|r| retained.iter().map(|&j| r[j]).collect())
            .collect();
        let v = vif(&sub)?;
        let (pos, &max) = v
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| {
                if *cur.1 >= *best.1 {
                    cur
                } else {
                    best
                }
            });
        if max < limits.vif {
            break;
        }
        let j = retained.remove(pos);
        log.push(Removal {
            feature: names[j].clone(),
            trigger: Trigger::Vif { vif: max },
        });
    }

    if retained.is_empty() {
        return Err(DetectorError::AllColumnsPruned);
    }
    Ok(Pruning { retained, log })
}
