// Coupled-mode parameters from mirror polarizability and lengths, plus a
// configuration-driven run writing the same data as `cavity-cascade match`.
//
//     cargo run --example parameter_matching [out-dir]

use cavity_cascade::cli::{run_match, ExperimentConfig};
use cavity_cascade::matching::{g_from_geometry, g_unequal_lengths, match_cascaded, CascadedOptions, CouplingRule};
use cavity_cascade::Result;

pub fn run(out: &std::path::Path) -> Result<std::path::PathBuf> {
    for zeta in [3.0, 5.0, 20.0] {
        let m = match_cascaded(zeta, 1.0, 5.0, &CascadedOptions::default())?;
        println!(
            "zeta {zeta:>4}: kappa {:.6e}  omega_c {:.6}  g {:.6e}  fiber {:.6}",
            m.params.kappa, m.params.omega_c, m.params.g, m.l_f
        );
    }
    println!(
        "unequal lengths 1 and 5 at zeta 5: g {:.6} (arithmetic form {:.6})",
        g_unequal_lengths(5.0, 1.0, 5.0)?,
        g_from_geometry(5.0, 1.0, 5.0)?
    );
    let literal = CascadedOptions { coupling: CouplingRule::ArithmeticMean, ..Default::default() };
    println!("with the arithmetic form: g {:.6}", match_cascaded(5.0, 1.0, 5.0, &literal)?.params.g);

    let config = ExperimentConfig::from_toml_str("[geometry]\nzeta = 5.0\nl_f = 5.0\n")?;
    let report = run_match(&config, out)?;
    println!("{}", report.summary.join("\n"));
    Ok(report.files[0].clone())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/parameter-matching".into());
    run(std::path::Path::new(&out)).map(|_| ())
}
