//! Capacity curves and where the schemes overtake each other.

use qkr::attacks::Measure;
use qkr::capacity::{
    all_zero_point, beta_grid, capacity_curve, eight_vs_six_crossover, zero_capacity_point,
};
use qkr::encodings::Scheme;

fn main() -> qkr::Result<()> {
    let grid = beta_grid(0.0, 0.16, 0.02)?;
    for m in Measure::ALL {
        println!("{m} capacity");
        let curves: Vec<_> = Scheme::ALL
            .iter()
            .map(|&s| capacity_curve(s, m, &grid))
            .collect::<qkr::Result<_>>()?;
        for (k, b) in grid.iter().enumerate() {
            let cells: Vec<String> = curves
                .iter()
                .map(|c| format!("{:>9.5} {:<7}", c[k].clamped(), c[k].argmax_label()))
                .collect();
            println!("  β={b:.2} {}", cells.join(""));
        }
        println!(
            "  8-state beats 6-state up to β = {:.6}",
            eight_vs_six_crossover(m)?
        );
        for s in Scheme::ALL {
            println!(
                "  {s} capacity vanishes at β = {:.6}",
                zero_capacity_point(s, m)?
            );
        }
        println!("  all capacities zero beyond β = {:.6}", all_zero_point(m)?);
    }
    Ok(())
}
