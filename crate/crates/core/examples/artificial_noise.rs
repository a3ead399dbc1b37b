//! Alice flips her bits with probability ε before encoding. This costs her
//! and Bob some information but costs the adversary more, which extends the
//! range of noise levels with positive QKD capacity.

use qkr::capacity::{
    beta_grid, c_prime, noise_curve, optimized_threshold, optimized_threshold_limit,
    plain_threshold, star,
};

fn main() -> qkr::Result<()> {
    println!("0.1 ⋆ 0.2 = {}", star(0.1, 0.2));
    println!("C'(ε=0.1, β=0.15) = {:.6}", c_prime(0.1, 0.15)?);

    for p in noise_curve(&beta_grid(0.14, 0.164, 0.002)?)? {
        println!(
            "β={:.3}  ε_opt={:.4}  C={:+.3e}  C_opt={:+.3e}",
            p.beta, p.epsilon_opt, p.capacity_plain, p.capacity_opt
        );
    }
    println!(
        "positive capacity without noise up to β = {:.6}",
        plain_threshold()?
    );
    println!(
        "with optimized noise up to β = {:.6}",
        optimized_threshold()?
    );
    println!(
        "small-ε limit of that threshold: {:.7}",
        optimized_threshold_limit()?
    );
    Ok(())
}
