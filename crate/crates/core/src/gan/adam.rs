use serde::{Deserialize, Serialize};

use super::TrainError;

pub const ADAM_EPSILON: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub lr: f64,
    pub betas: (f64, f64),
    pub step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(num_params: usize, lr: f64, betas: (f64, f64)) -> Self {
        Self {
            lr,
            betas,
            step: 0,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
        }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// One bias-corrected update of `params` in place.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<(), TrainError> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(TrainError::LengthMismatch {
                expected: self.m.len(),
                got: if params.len() != self.m.len() { params.len() } else { grads.len() },
            });
        }
        self.step += 1;
        let (b1, b2) = self.betas;
        let c1 = 1.0 - b1.powi(self.step as i32);
        let c2 = 1.0 - b2.powi(self.step as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * g;
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * g * g;
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_noop() {
        let mut s = AdamState::new(3, 1e-2, (0.9, 0.999));
        let mut p = vec![0.5, -1.0, 2.0];
        s.step(&mut p, &[0.0; 3]).unwrap();
        assert_eq!(p, vec![0.5, -1.0, 2.0]);
    }

    #[test]
    fn first_step_is_signed_learning_rate() {
        let mut s = AdamState::new(3, 1e-3, (0.7, 0.99));
        let mut p = vec![0.0; 3];
        s.step(&mut p, &[4.0, -0.02, 1e3]).unwrap();
        for (x, sign) in p.iter().zip([-1.0, 1.0, -1.0]) {
            assert!((x - sign * 1e-3).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn three_steps_against_reference() {
        let grads = [[0.3, -1.2], [0.1, 0.4], [-0.5, 2.0]];
        let (lr, b1, b2) = (0.01, 0.8, 0.95);
        let mut s = AdamState::new(2, lr, (b1, b2));
        let mut p = vec![1.0, -2.0];
        for g in &grads {
            s.step(&mut p, g).unwrap();
        }
        // textbook recurrences written out independently per coordinate
        let mut expect = [1.0f64, -2.0];
        for (j, e) in expect.iter_mut().enumerate() {
            let (mut m, mut v) = (0.0f64, 0.0f64);
            for (t, g) in grads.iter().enumerate() {
                let t = (t + 1) as f64;
                m = b1 * m + (1.0 - b1) * g[j];
                v = b2 * v + (1.0 - b2) * g[j] * g[j];
                let mh = m / (1.0 - b1.powf(t));
                let vh = v / (1.0 - b2.powf(t));
                *e -= lr * mh / (vh.sqrt() + 1e-8);
            }
        }
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(s.step, 3);
    }

    #[test]
    fn mismatched_lengths() {
        let mut s = AdamState::new(2, 0.1, (0.9, 0.999));
        let mut p = vec![0.0; 3];
        assert!(matches!(
            s.step(&mut p, &[0.0; 3]),
            Err(TrainError::LengthMismatch { expected: 2, got: 3 })
        ));
    }
}
