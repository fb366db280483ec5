pub fn grid5() -> Vec<f64> {
    (0..5).map(|k| k as f64 * 0.125).collect()
}
