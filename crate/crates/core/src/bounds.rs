//! Normal approximation to the best achievable block error rate over the
//! binary-input AWGN channel, and horizontal gap measurement between TFR
//! curves.
//!
//! `eps ~= Q((n C - k + log2(n) / 2) / sqrt(n V))` with capacity `C` and
//! dispersion `V` in bits, both computed by Gauss-Hermite quadrature with
//! [`GH_NODES`] nodes. Curves produced here are labelled `NA` in reports;
//! they stand in for the saddlepoint RCU bound and are typically within a
//! tenth of a dB of it at these lengths.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::spectrum::q_function;

/// Gauss-Hermite node count used for capacity and dispersion.
pub const GH_NODES: usize = 96;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundQuery {
    pub n_transmit: usize,
    pub k_message: usize,
    pub ebno_db: f64,
}

impl BoundQuery {
    pub fn new(n_transmit: usize, k_message: usize, ebno_db: f64) -> Result<Self> {
        if k_message == 0 || k_message >= n_transmit {
            return Err(Error::InvalidArgument(format!(
                "need 0 < k < n, got k = {k_message}, n = {n_transmit}"
            )));
        }
        Ok(BoundQuery {
            n_transmit,
            k_message,
            ebno_db,
        })
    }

    /// Symbol SNR `Es/N0` (linear) for unit-energy BPSK.
    pub fn esno(&self) -> f64 {
        self.k_message as f64 / self.n_transmit as f64 * 10f64.powf(self.ebno_db / 10.0)
    }
}

/// Nodes and weights for `int exp(-x^2) f(x) dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0f64);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_hermite(GH_NODES))
}

/// `log2(1 + exp(-t))` without overflow.
fn log2_1p_exp_neg(t: f64) -> f64 {
    let nats = if t > 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    };
    nats / std::f64::consts::LN_2
}

/// Information density of the BI-AWGN channel for input +1 and output `y`,
/// in bits.
pub fn info_density(y: f64, sigma: f64) -> f64 {
    1.0 - log2_1p_exp_neg(2.0 * y / (sigma * sigma))
}

/// Capacity and dispersion (bits, bits^2) at symbol SNR `esno` (linear).
pub fn capacity_dispersion(esno: f64) -> (f64, f64) {
    if esno.is_infinite() {
        return (1.0, 0.0);
    }
    let sigma = (1.0 / (2.0 * esno)).sqrt();
    let (x, w) = nodes();
    let norm = std::f64::consts::PI.sqrt();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&xi, &wi) in x.iter().zip(w) {
        let z = std::f64::consts::SQRT_2 * xi;
        let i = info_density(1.0 + sigma * z, sigma);
        m1 += wi * i;
        m2 += wi * i * i;
    }
    let c = m1 / norm;
    let v = (m2 / norm - c * c).max(0.0);
    (c, v)
}

pub fn normal_approx_epsilon(q: &BoundQuery) -> f64 {
    let n = q.n_transmit as f64;
    let (c, v) = capacity_dispersion(q.esno());
    let num = n * c - q.k_message as f64 + 0.5 * n.log2();
    if v == 0.0 {
        return if num > 0.0 { 0.0 } else { 1.0 };
    }
    q_function(num / (n * v).sqrt())
}

/// `(ebno_db, epsilon)` points of the normal approximation.
pub fn bound_curve(
    n_transmit: usize,
    k_message: usize,
    ebno_db: &[f64],
) -> Result<Vec<(f64, f64)>> {
    ebno_db
        .iter()
        .map(|&e| {
            Ok((
                e,
                normal_approx_epsilon(&BoundQuery::new(n_transmit, k_message, e)?),
            ))
        })
        .collect()
}

/// Eb/N0 at which a decreasing curve reaches `target`, interpolating
/// linearly in `log10(TFR)`. Zero-TFR points are ignored.
pub fn ebno_at(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.1 > 0.0).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let lt = target.log10();
    pts.windows(2).find_map(|w| {
        let (e0, t0) = (w[0].0, w[0].1.log10());
        let (e1, t1) = (w[1].0, w[1].1.log10());
        if t0 >= lt && lt >= t1 {
            if t0 == t1 {
                return Some(e0);
            }
            Some(e0 + (t0 - lt) / (t0 - t1) * (e1 - e0))
        } else {
            None
        }
    })
}

/// Horizontal distance in dB between `simulated` and `bound` at a matched
/// TFR; positive when the simulated curve lies to the right.
pub fn gap_to_bound(
    simulated: &[(f64, f64)],
    bound: &[(f64, f64)],
    target_tfr: f64,
) -> Option<f64> {
    Some(ebno_at(simulated, target_tfr)? - ebno_at(bound, target_tfr)?)
}

/// Gap at every simulated point with nonzero TFR, as `(tfr, gap_db)`.
pub fn gap_curve(simulated: &[(f64, f64)], bound: &[(f64, f64)]) -> Vec<(f64, f64)> {
    simulated
        .iter()
        .filter(|p| p.1 > 0.0)
        .filter_map(|&(e, t)| ebno_at(bound, t).map(|b| (t, e - b)))
        .collect()
}
