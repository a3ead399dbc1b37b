//! Numerical search for Shannon-optimal POVMs on the K2 ancilla ensembles,
//! compared with the conjectured constructions.
//!
//! Uses 81 starts and 10^5 random POVMs per point; the acceptance suite
//! runs the full 729 starts and 10^6 samples.

use qkr::encodings::Scheme;
use qkr::eve::NoiseLevel;
use qkr::search::{run_search, SearchConfig, StartPoint};

fn main() -> qkr::Result<()> {
    for scheme in [Scheme::SixState, Scheme::EightState] {
        for b in [0.05, 0.1, 0.2] {
            let mut cfg = SearchConfig::for_scheme(scheme, 2024);
            cfg.start = StartPoint::SignPatterns { directions: 4 };
            let r = run_search(scheme, NoiseLevel::new(b)?, &cfg, 100_000)?;
            println!(
                "{scheme} β={b}: search {:.9}  conjecture {:.9}  gap {:+.1e}  best random {:.6}",
                r.best_entropy, r.conjectured_entropy, r.gap_to_conjecture, r.mc_min_entropy
            );
        }
    }
    Ok(())
}
