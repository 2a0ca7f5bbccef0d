use super::MetricsError;

/// Floor applied to model probabilities before taking logs.
pub const Q_FLOOR: f64 = 1e-12;

const NORMALIZATION_TOLERANCE: f64 = 1e-8;

fn check_distribution(p: &[f64], which: &'static str) -> Result<(), MetricsError> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) || (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(MetricsError::NotNormalized { which, sum });
    }
    Ok(())
}

/// Relative entropy `D(P‖Q) = Σ_{P(x)>0} P(x) ln(P(x) / max(Q(x), 1e-12))` in nats.
///
/// `P` is the target, `Q` the model.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, MetricsError> {
    if p.len() != q.len() {
        return Err(MetricsError::LengthMismatch(p.len(), q.len()));
    }
    check_distribution(p, "P")?;
    check_distribution(q, "Q")?;
    let d: f64 = p
        .iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi.max(Q_FLOOR)).ln())
        .sum();
    // Gibbs' inequality; clamp round-off below zero
    Ok(d.max(0.0))
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_statistic(samples_a: &[f64], samples_b: &[f64]) -> Result<f64, MetricsError> {
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(MetricsError::EmptySample);
    }
    let mut a = samples_a.to_vec();
    let mut b = samples_b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut stat: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // step both ECDFs past every copy of the smallest pending value
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        stat = stat.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(stat)
}
