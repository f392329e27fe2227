//! Compensated summation helpers.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// `ln Σ exp(l_i)`, terms summed in descending magnitude with compensation.
///
/// Returns `-inf` for an empty input or when every term is `-inf`.
pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut scaled: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    scaled.sort_by(|a, b| b.total_cmp(a));
    let total: CompensatedSum = scaled.into_iter().collect();
    max + total.total().ln()
}

/// Table of `ln n!` for `n = 0..=max`.
pub fn ln_factorials(max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for k in 1..=max {
        acc.add((k as f64).ln());
        out.push(acc.total());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        let naive: f64 = std::iter::repeat(1e-16).take(1000).sum();
        assert!((acc.total() - naive).abs() < 1e-27, "{}", acc.total());
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let l = log_sum_exp(&[1000.0, 1000.0]);
        assert!((l - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn ln_factorials_match_direct_products() {
        let table = ln_factorials(20);
        let mut f = 1.0f64;
        for (n, &lf) in table.iter().enumerate() {
            if n > 0 {
                f *= n as f64;
            }
            assert!((lf - f.ln()).abs() < 1e-13 * f.ln().abs().max(1.0), "n={n}");
        }
    }
}
