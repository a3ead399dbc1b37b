//! The adversary's side of a noisy channel: Bell-diagonal noise,
//! purification, and the ancilla states ζ_b she holds.

use qkr::encodings::{BlochVector, Scheme};
use qkr::eve::{
    ancilla_vectors, purified_abe, same_outcome_weight, symmetrized_ab, trace_out_ancilla,
    AncillaEnsemble, NoiseLevel,
};
use qkr::linalg::eig_hermitian;

fn main() -> qkr::Result<()> {
    let beta = NoiseLevel::new(0.1)?;

    let rho = symmetrized_ab(beta);
    let reduced = trace_out_ancilla(&purified_abe(beta))?;
    println!(
        "purification reproduces ρ_AB: max diff {:.1e}",
        reduced.max_diff(&rho)
    );

    let v = BlochVector::normalized(1.0, -1.0, 1.0)?;
    let e = ancilla_vectors(&v, beta);
    println!(
        "⟨E01|E10⟩ = {:.6}  (1−2β)/(1−β) = {:.6}",
        e.e01.inner(&e.e10).re,
        0.8 / 0.9
    );
    println!("⟨E00|E11⟩ = {:.1e}", e.e00.inner(&e.e11).norm());
    let psi = qkr::encodings::measurement_basis(&v)?.0;
    println!(
        "same-outcome weight {:.6} (β/2 = 0.05)",
        same_outcome_weight(&rho, &psi)
    );

    for scheme in Scheme::ALL {
        let ens = AncillaEnsemble::new(scheme, beta, 0)?;
        let spectrum = eig_hermitian(&ens.states[0])?;
        let rank = spectrum.eigenvalues.iter().filter(|l| **l > 1e-12).count();
        println!("{scheme}: {} ancilla states, ζ_0 rank {rank}", ens.len());
    }
    Ok(())
}
