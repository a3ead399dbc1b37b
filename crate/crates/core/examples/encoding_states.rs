//! Qubit states and Bloch vectors for each conjugate-coding scheme.

use qkr::encodings::{all_states, bloch_vector, spin_expectation, Scheme};

fn main() -> qkr::Result<()> {
    for scheme in Scheme::ALL {
        println!(
            "{scheme}: {} bases, {} states",
            scheme.size(),
            scheme.states()
        );
        for (b, g, psi) in all_states(scheme) {
            let n = bloch_vector(scheme, b, g)?;
            let [x, y, z] = n.as_array();
            println!(
                "  {:<8} g={g}  n=({x:+.4}, {y:+.4}, {z:+.4})  ⟨n·σ⟩={:+.3}",
                scheme.label(b),
                spin_expectation(&psi, &n)
            );
        }
    }
    Ok(())
}
