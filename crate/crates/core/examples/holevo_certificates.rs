//! Certify the known-plaintext min-entropy POVMs with the Holevo condition
//! `Λ − ζ_b ⪰ 0`, and show one that fails outside its range.

use qkr::attacks::{k2_povm, Measure};
use qkr::encodings::Scheme;
use qkr::entropy::{guessing_probability, holevo_certificate, min_entropy_binary, POVM_TOL};
use qkr::eve::{AncillaEnsemble, NoiseLevel};

fn main() -> qkr::Result<()> {
    for scheme in Scheme::ALL {
        println!("{scheme}");
        for b in [0.05, 0.15, 0.25, 0.35, 0.45] {
            let beta = NoiseLevel::new(b)?;
            let ens = AncillaEnsemble::new(scheme, beta, 0)?;
            let povm = k2_povm(scheme, Measure::MinEntropy, beta);
            let rep = holevo_certificate(&ens, &povm, POVM_TOL);
            println!(
                "  β={b:.2}  P_guess={:.6}  min eig(Λ−ζ)={:+.2e}  {}",
                guessing_probability(&ens, &povm)?,
                rep.min_eigenvalue,
                if rep.passed { "certified" } else { "FAILED" }
            );
        }
    }

    // The β ≤ 1/3 construction is not optimal above 1/3.
    let low = k2_povm(
        Scheme::EightState,
        Measure::MinEntropy,
        NoiseLevel::new(0.3)?,
    );
    let ens = AncillaEnsemble::new(Scheme::EightState, NoiseLevel::new(0.4)?, 0)?;
    let rep = holevo_certificate(&ens, &low, POVM_TOL);
    println!(
        "8-state low-noise POVM at β=0.4: min eig {:+.3}",
        rep.min_eigenvalue
    );

    let four = AncillaEnsemble::at(Scheme::FourState, 0.1)?;
    let h = min_entropy_binary(0.5, &four.states[0], &four.states[1])?;
    println!("binary min-entropy of the 4-state basis at β=0.1: {h:.7}");
    Ok(())
}
