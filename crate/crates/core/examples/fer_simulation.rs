//! A small Monte Carlo sweep with a CSV table on stdout.
//!
//! ```bash
//! cargo run --release --example fer_simulation
//! ```

use listfec::harness::{csv_header_comments, to_csv, SimConfig, Simulator};

fn main() -> listfec::Result<()> {
    let mut cfg = SimConfig::new("tbcc-575-623-727-561-753", vec![0.0, 1.0, 2.0], 64, 42);
    cfg.min_failures = 30;
    cfg.max_trials = 20_000;
    let sim = Simulator::new(cfg)?;
    let rows = sim.run()?;
    print!("{}", to_csv(&rows, &csv_header_comments(sim.config())));
    Ok(())
}
