//! Sample statistics over terminal-value arrays.
//!
//! Sums use Neumaier compensation so that results do not depend on how
//! paths were distributed across workers (samples are always reduced in
//! path-index order).

/// Compensated (Neumaier) sum.
pub fn sum(values: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for &v in values {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn mean(values: &[f64]) -> f64 {
    sum(values) / values.len() as f64
}

/// Sample standard deviation (Bessel-corrected), two-pass.
pub fn std_dev(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let mut sq = 0.0;
    let mut c = 0.0;
    for &v in values {
        let d = v - m;
        let t = sq + d * d;
        c += if sq.abs() >= d * d { (sq - t) + d * d } else { (d * d - t) + sq };
        sq = t;
    }
    ((sq + c) / (n - 1) as f64).sqrt()
}

pub fn standard_error(values: &[f64]) -> f64 {
    std_dev(values) / (values.len() as f64).sqrt()
}

/// Standard error of the sample variance, estimated through the fourth
/// central moment: `SE(s^2) ~ sqrt((m4 - s^4 (n-3)/(n-1)) / n)`.
pub fn variance_standard_error(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if n < 4.0 {
        return f64::INFINITY;
    }
    let m = mean(values);
    let s2 = std_dev(values).powi(2);
    let m4 = values.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    ((m4 - s2 * s2 * (n - 3.0) / (n - 1.0)).max(0.0) / n).sqrt()
}

/// Quantile with R-7 linear interpolation (the R/NumPy default) on a
/// pre-sorted slice. `p` in [0, 1].
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = lo + 1;
    if hi >= n {
        return sorted[n - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
