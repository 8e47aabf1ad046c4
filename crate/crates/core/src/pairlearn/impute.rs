use serde::{Deserialize, Serialize};

/// Mean imputation fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Imputer {
    pub means: Vec<f64>,
}

impl Imputer {
    /// Column means over present values; columns with no value get 0.
    pub fn fit(rows: &[Vec<Option<f64>>]) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        let mut sums = vec![0.0; width];
        let mut counts = vec![0usize; width];
        for row in rows {
            for (j, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    sums[j] += v;
                    counts[j] += 1;
                }
            }
        }
        Imputer {
            means: sums
                .into_iter()
                .zip(counts)
                .map(|(s, c)| if c > 0 { s / c as f64 } else { 0.0 })
                .collect(),
        }
    }

    pub fn transform(&self, row: &[Option<f64>]) -> Vec<f64> {
        row.iter()
            .zip(&self.means)
            .map(|(v, m)| v.unwrap_or(*m))
            .collect()
    }

    pub fn transform_all(&self, rows: &[Vec<Option<f64>>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_missing_with_training_mean() {
        let rows = vec![
            vec![Some(1.0), None, None],
            vec![Some(3.0), Some(0.5), None],
        ];
        let imp = Imputer::fit(&rows);
        assert_eq!(imp.means, vec![2.0, 0.5, 0.0]);
        assert_eq!(imp.transform(&[None, None, Some(0.2)]), vec![2.0, 0.5, 0.2]);
    }
}
