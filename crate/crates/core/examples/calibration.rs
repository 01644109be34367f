//! Runs the calibrated model and its no-network ablation and prints the
//! duration shares side by side.
//!
//! cargo run --release -p cascade-core --example calibration [runs]

use cascade_core::stats::nls_exp_hist;
use cascade_core::{monte_carlo, CountryRoster, ModelParams};

fn main() -> cascade_core::Result<()> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5000);
    let roster = CountryRoster::synthetic();
    for (name, params) in [("network", ModelParams::default()), ("ablated", ModelParams::default().ablated())] {
        let s = monte_carlo(&params, &roster, runs, 42)?;
        let shares: Vec<String> = (1..=7).map(|d| format!("{:.3}", s.duration_share(d))).collect();
        let fit = nls_exp_hist(&s.duration_counts, 1, s.duration_counts.max_value().unwrap_or(1).max(3))?;
        println!(
            "{name:8} d=1..7 [{}]  spells {}  all-17 share {:.4}  max {}  slope {:.3}",
            shares.join(" "),
            s.total_spells,
            s.frac_all_in_recession,
            s.max_simultaneous,
            fit.b
        );
    }
    Ok(())
}
