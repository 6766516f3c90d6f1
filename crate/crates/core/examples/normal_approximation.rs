//! Normal-approximation finite-blocklength curve for 32 message bits over
//! 215 and 864 channel uses, and the Eb/N0 each needs for a target rate.
//!
//! ```bash
//! cargo run --example normal_approximation
//! ```

use listfec::bounds::{bound_curve, capacity_dispersion, ebno_at, BoundQuery};

fn main() -> listfec::Result<()> {
    let grid: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    for n in [215, 864] {
        let curve = bound_curve(n, 32, &grid)?;
        let q = BoundQuery::new(n, 32, 2.0)?;
        let (c, v) = capacity_dispersion(q.esno());
        println!("n={n}: C={c:.4} V={v:.4} at 2 dB");
        for (e, eps) in curve.iter().step_by(4) {
            println!("  {e:>4.2} dB  {eps:.3e}");
        }
        for target in [1e-3, 1e-4, 1e-6] {
            if let Some(e) = ebno_at(&curve, target) {
                println!("  TFR {target:.0e} needs {e:.3} dB");
            }
        }
    }
    Ok(())
}
