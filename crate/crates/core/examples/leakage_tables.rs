//! Leakage per qubit for every attack, scheme and measure.

use qkr::attacks::{leakage, Attack, Measure};
use qkr::capacity::max_leakage;
use qkr::encodings::Scheme;
use qkr::eve::NoiseLevel;

fn main() -> qkr::Result<()> {
    for b in [0.0, 0.05, 0.1, 0.2] {
        let beta = NoiseLevel::new(b)?;
        for m in Measure::ALL {
            println!("β = {b}, {m}");
            for a in Attack::ALL {
                let cells: Vec<String> = Scheme::ALL
                    .iter()
                    .map(|&s| format!("{:>14.6}", tidy(leakage(s, a, m, beta))))
                    .collect();
                println!("  {a}  {}", cells.join(""));
            }
            let strongest: Vec<String> = Scheme::ALL
                .iter()
                .map(|&s| {
                    let (_, who) = max_leakage(s, m, beta);
                    format!(
                        "{:>14}",
                        who.iter().map(|a| a.name()).collect::<Vec<_>>().join("+")
                    )
                })
                .collect();
            println!("  max {}", strongest.join(""));
        }
    }
    Ok(())
}

fn tidy(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}
