//! Local four-point cubic interpolation on sorted nodes.

/// Cubic Lagrange interpolation through the four nodes nearest `x`.
/// `xs` must be strictly increasing with at least two entries; returns `None`
/// outside `[xs[0], xs[last]]`.
pub fn cubic(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let n = xs.len();
    debug_assert_eq!(n, ys.len());
    if n < 2 || !(x >= xs[0] && x <= xs[n - 1]) {
        return None;
    }
    if n < 4 {
        let i = xs.partition_point(|&v| v <= x).clamp(1, n - 1);
        let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return Some(ys[i - 1] + t * (ys[i] - ys[i - 1]));
    }
    // xs[i] <= x < xs[i + 1]
    let i = xs.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2);
    let start = i.saturating_sub(1).min(n - 4);
    let nodes = &xs[start..start + 4];
    let vals = &ys[start..start + 4];
    let mut acc = 0.0;
    for j in 0..4 {
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (x - nodes[k]) / (nodes[j] - nodes[k]);
            }
        }
        acc += w * vals[j];
    }
    Some(acc)
}
