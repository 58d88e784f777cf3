use serde::Serialize;

/// Per-`n` mean, standard error and trial count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateSeries {
    pub n: Vec<u32>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub trials: Vec<u64>,
    /// Values computed exactly rather than estimated.
    pub exact: Vec<bool>,
}

impl EstimateSeries {
    pub fn exact(n: Vec<u32>, values: Vec<f64>) -> EstimateSeries {
        let k = n.len();
        assert_eq!(k, values.len());
        EstimateSeries { n, mean: values, stderr: vec![0.0; k], trials: vec![1; k], exact: vec![true; k] }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Mean at a given `n`, if recorded.
    pub fn at(&self, n: u32) -> Option<f64> {
        self.n.iter().position(|&m| m == n).map(|i| self.mean[i])
    }

    /// CSV with header `n,mean,stderr,trials,exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mean,stderr,trials,exact\n");
        for i in 0..self.n.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.n[i],
                self.mean[i],
                self.stderr[i],
                self.trials[i],
                u8::from(self.exact[i])
            ));
        }
        out
    }
}

/// Integer-valued observations summed exactly, so merging is associative and order-free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeriesAccumulator {
    sum: Vec<i64>,
    sumsq: Vec<u128>,
    count: u64,
}

impl SeriesAccumulator {
    pub fn new(len: usize) -> SeriesAccumulator {
        SeriesAccumulator { sum: vec![0; len], sumsq: vec![0; len], count: 0 }
    }

    /// Adds one trial's observations, indexed like the series.
    pub fn push(&mut self, values: &[i64]) {
        assert_eq!(values.len(), self.sum.len());
        for (i, &v) in values.iter().enumerate() {
            self.sum[i] += v;
            self.sumsq[i] += (v as i128 * v as i128) as u128;
        }
        self.count += 1;
    }

    pub fn merge(mut self, other: &SeriesAccumulator) -> SeriesAccumulator {
        if self.sum.is_empty() && self.count == 0 {
            return other.clone();
        }
        assert_eq!(self.sum.len(), other.sum.len());
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sumsq[i] += other.sumsq[i];
        }
        self.count += other.count;
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self, n: Vec<u32>) -> EstimateSeries {
        assert_eq!(n.len(), self.sum.len());
        let t = self.count as f64;
        let mut mean = Vec::with_capacity(n.len());
        let mut stderr = Vec::with_capacity(n.len());
        for i in 0..n.len() {
            let m = self.sum[i] as f64 / t;
            let var = if self.count > 1 { ((self.sumsq[i] as f64 - t * m * m) / (t - 1.0)).max(0.0) } else { 0.0 };
            mean.push(m);
            stderr.push((var / t).sqrt());
        }
        let k = n.len();
        EstimateSeries { n, mean, stderr, trials: vec![self.count; k], exact: vec![false; k] }
    }
}

/// Least-squares slope of `log y` against `log x` over points with `y > 0`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_free() {
        let mut a = SeriesAccumulator::new(2);
        a.push(&[1, 4]);
        let mut b = SeriesAccumulator::new(2);
        b.push(&[3, 0]);
        b.push(&[2, 2]);
        assert_eq!(a.clone().merge(&b), b.clone().merge(&a));
        let s = a.merge(&b).finish(vec![1, 2]);
        assert_eq!(s.mean, vec![2.0, 2.0]);
        assert!((s.stderr[0] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(s.to_csv().starts_with("n,mean,stderr,trials,exact\n1,2,"));
    }

    #[test]
    fn slope_of_power_law() {
        let x: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.5)).collect();
        assert!((loglog_slope(&x, &y) + 1.5).abs() < 1e-12);
    }
}
