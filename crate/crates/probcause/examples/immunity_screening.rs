//! Ranking response types: who needs the intervention at all?
//!
//! For a vaccine, the interesting split is not just "does it help on
//! average". Immunity (protected either way) and doom (infected either way)
//! describe people the campaign cannot affect; benefit counts the people it
//! actually protects. All four fractions get sharp bounds from the same two
//! data sources, and they interlock: each interventional marginal is an
//! exact sum of two of them.
//!
//! Run with: `cargo run --example immunity_screening`

use std::path::PathBuf;

use probcause::{epsilon_feasible_min, response_bounds, Input, ResponseTarget};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = Input::load(&fixture("example2.json"))?;
    let (joint, exp) = input.joint_and_marginals()?;

    println!("Outcome y = stays healthy; exposure x = vaccinated.");
    println!(
        "  p(y_x) = {:.2}, p(y_x') = {:.2}",
        exp.p_y_do_x(),
        exp.p_y_do_xp()
    );
    println!();

    println!("Bounds for every response type:");
    for target in ResponseTarget::ALL {
        let interval = response_bounds(target, &joint, &exp)?;
        println!(
            "  {:<9} [{:.3}, {:.3}]  width {:.3}",
            target.to_string(),
            interval.lower,
            interval.upper,
            interval.width()
        );
    }
    println!();

    // Identities the intervals must respect (they hold for every
    // distribution, so they double as a self-check here):
    let benefit = response_bounds(ResponseTarget::Benefit, &joint, &exp)?;
    let immunity = response_bounds(ResponseTarget::Immunity, &joint, &exp)?;
    println!("Interlocking structure:");
    println!(
        "  p(y_x) = p(immunity) + p(benefit): {:.2} vs [{:.3}, {:.3}] + [{:.3}, {:.3}]",
        exp.p_y_do_x(),
        immunity.lower,
        immunity.upper,
        benefit.lower,
        benefit.upper
    );
    println!(
        "  any immunity value below {:.3} contradicts the data",
        epsilon_feasible_min(&joint, &exp)
    );
    println!();

    println!(
        "Here immunity can be as low as {:.3}: the data cannot rule out that",
        immunity.lower
    );
    println!("nobody is naturally protected, so screening for immunity before");
    println!(
        "vaccinating would chase at most {:.0}% of the population.",
        immunity.upper * 100.0
    );

    Ok(())
}
