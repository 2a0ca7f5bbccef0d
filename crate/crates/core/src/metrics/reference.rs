//! Reference results for the 5-qubit zoufal ansatz on an energy-price
//! distribution, ten runs per row. Used as a fixture for the selection logic;
//! the raw data behind them is not shipped.

use crate::quantum::InitKind;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub initialization: InitKind,
    pub k: usize,
    pub mu_ks: f64,
    pub sigma_ks: f64,
    pub mu_re: f64,
    pub sigma_re: f64,
    pub mu_depth: f64,
}

impl ReferenceRow {
    pub fn label(&self) -> String {
        format!("{}-k{}", self.initialization, self.k)
    }
}

const fn row(
    initialization: InitKind,
    k: usize,
    mu_ks: f64,
    sigma_ks: f64,
    mu_re: f64,
    sigma_re: f64,
    mu_depth: f64,
) -> ReferenceRow {
    ReferenceRow {
        initialization,
        k,
        mu_ks,
        sigma_ks,
        mu_re,
        sigma_re,
        mu_depth,
    }
}

pub const FIVE_QUBIT_ZOUFAL: [ReferenceRow; 9] = [
    row(InitKind::Uniform, 1, 0.1780, 0.0519, 0.5692, 0.1325, 41.18),
    row(InitKind::Uniform, 2, 0.1104, 0.0470, 0.3562, 0.0947, 77.09),
    row(InitKind::Uniform, 3, 0.1540, 0.0807, 0.4329, 0.2479, 104.52),
    row(InitKind::Normal, 1, 0.1570, 0.0389, 0.2793, 0.0269, 203.42),
    row(InitKind::Normal, 2, 0.1446, 0.0531, 0.2434, 0.0383, 238.38),
    row(InitKind::Normal, 3, 0.1516, 0.0305, 0.2510, 0.0343, 271.2),
    row(InitKind::Random, 1, 0.3420, 0.1676, 1.1412, 0.6072, 33.75),
    row(InitKind::Random, 2, 0.1992, 0.0970, 0.7595, 0.3290, 74.55),
    row(InitKind::Random, 3, 0.1536, 0.1034, 0.5494, 0.4724, 101.89),
];
