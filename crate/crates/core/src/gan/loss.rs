/// Probabilities are clamped into this band before any logarithm.
pub const PROB_CLAMP: f64 = 1e-12;

pub(crate) fn clamped_ln(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP).ln()
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    xs.sum::<f64>() / n as f64
}

/// Non-saturating GAN losses from discriminator outputs `D = P(real)`:
///
/// * `L_D = −mean ln D(real) − mean ln(1 − D(fake))`
/// * `L_G = −mean ln D(fake)`
pub fn gan_losses(real: &[f64], fake: &[f64]) -> (f64, f64) {
    let l_d = -mean(real.iter().map(|&p| clamped_ln(p)))
        - mean(fake.iter().map(|&p| clamped_ln(1.0 - p)));
    let l_g = -mean(fake.iter().map(|&p| clamped_ln(p)));
    (l_d, l_g)
}
