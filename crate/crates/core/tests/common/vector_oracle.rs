use strata::vector::Metric;

/// Full scan that accumulates from the last component down and sorts everything.
pub fn rescan(rows: &[Vec<f32>], q: &[f32], k: usize, metric: Metric) -> Vec<(u64, f64)> {
    let mut scored: Vec<(u64, f64)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (mut dot, mut rr, mut qq, mut l2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
            for j in (0..r.len()).rev() {
                let (a, b) = (r[j] as f64, q[j] as f64);
                dot += a * b;
                rr += a * a;
                qq += b * b;
                l2 += (a - b) * (a - b);
            }
            let s = match metric {
                Metric::Dot => dot,
                Metric::L2 => l2.sqrt(),
                Metric::Cosine if rr == 0.0 || qq == 0.0 => 0.0,
                Metric::Cosine => dot / (rr.sqrt() * qq.sqrt()),
            };
            (i as u64, s)
        })
        .collect();
    scored.sort_by(|a, b| {
        let o = if metric == Metric::L2 {
            a.1.partial_cmp(&b.1)
        } else {
            b.1.partial_cmp(&a.1)
        };
        o.unwrap().then(a.0.cmp(&b.0))
    });
    scored.truncate(k);
    scored
}
