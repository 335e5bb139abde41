// How much the side peaks of the two models disagree, as the mirrors get
// better. The difference shrinks faster than the line width.
//
//     cargo run --release --example peak_delta

use cavity_cascade::matching::CascadedOptions;
use cavity_cascade::spectra::{peak_separation_delta, DeltaEntry};
use cavity_cascade::Result;

pub fn run() -> Result<Vec<DeltaEntry>> {
    let zetas = [3.0, 5.0, 8.0, 12.0, 20.0];
    let entries = peak_separation_delta(&zetas, 1.0, 5.0, &CascadedOptions::default(), 4001);
    println!("{:>6} {:>14} {:>14}", "zeta", "delta", "delta/kappa");
    for e in &entries {
        match (&e.distances, e.delta_mean_over_kappa()) {
            (Some(d), Some(r)) => println!("{:>6} {:>14.6e} {:>14.6}", e.zeta, d.delta_mean, r),
            _ => println!("{:>6} failed: {}", e.zeta, e.error.as_deref().unwrap_or("?")),
        }
    }
    Ok(entries)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
