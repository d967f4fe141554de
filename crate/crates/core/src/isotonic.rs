//! Weighted isotonic regression by pool-adjacent-violators.

/// Non-increasing isotonic regression of `y` with weights `w`.
///
/// Returns the closest (weighted least squares) non-increasing sequence.
pub fn decreasing(y: &[f64], w: &[f64]) -> Vec<f64> {
    assert_eq!(y.len(), w.len());
    let n = y.len();
    if n == 0 {
        return Vec::new();
    }
    // PAVA on the negated sequence computes the non-decreasing fit.
    let mut level: Vec<f64> = Vec::with_capacity(n);
    let mut weight: Vec<f64> = Vec::with_capacity(n);
    let mut count: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        level.push(-y[i]);
        weight.push(w[i].max(1e-300));
        count.push(1);
        while level.len() > 1 {
            let m = level.len();
            if level[m - 2] <= level[m - 1] {
                break;
            }
            let wsum = weight[m - 2] + weight[m - 1];
            let merged = (weight[m - 2] * level[m - 2] + weight[m - 1] * level[m - 1]) / wsum;
            level.truncate(m - 1);
            weight.truncate(m - 1);
            let c = count.pop().unwrap();
            *level.last_mut().unwrap() = merged;
            *weight.last_mut().unwrap() = wsum;
            *count.last_mut().unwrap() += c;
        }
    }
    let mut out = Vec::with_capacity(n);
    for (lv, c) in level.iter().zip(count.iter()) {
        for _ in 0..*c {
            out.push(-lv);
        }
    }
    out
}
