//! Jacobi eigendecomposition and trace norm on the 4-state ancilla states.

use qkr::encodings::Scheme;
use qkr::eve::AncillaEnsemble;
use qkr::linalg::{eig_hermitian, spin_operator, trace_norm};

fn main() -> qkr::Result<()> {
    let n = [1.0, 1.0, 1.0].map(|x: f64| x / 3f64.sqrt());
    let spin = eig_hermitian(&spin_operator(n))?;
    println!("n·σ eigenvalues: {:?}", spin.eigenvalues);

    let ens = AncillaEnsemble::at(Scheme::FourState, 0.1)?;
    let diff = ens.states[0] - ens.states[1];
    let spectrum = eig_hermitian(&diff)?;
    println!("ζ_0 − ζ_1 spectrum at β = 0.1:");
    for (k, l) in spectrum.eigenvalues.iter().enumerate() {
        println!("  λ{k} = {l:+.6}");
    }
    let err = spectrum.reconstruct().max_diff(&diff);
    println!("reconstruction error {err:.1e}");
    println!("‖ζ_0 − ζ_1‖₁ = {:.7}", trace_norm(&diff)?);
    Ok(())
}
